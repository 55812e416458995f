#pragma once

// Plane-Cartesian EKF on a fixed local North-East tangent plane. Used as the
// baseline the geodetic filter is compared against.

#include <array>

#include "geotrack/geodesy.hpp"
#include "geotrack/linalg.hpp"
#include "geotrack/ukf.hpp"

namespace geotrack {

/// WGS84 tangent plane at a fixed origin. Points are mapped geodetic -> ECEF
/// -> NED and the down component is dropped.
class TangentPlane {
public:
    static constexpr GeoPoint kBostonOrigin{-71.0237, 42.3469};

    explicit TangentPlane(GeoPoint origin = kBostonOrigin);

    const GeoPoint& origin() const { return origin_; }

    struct Ned {
        double north = 0.0;
        double east = 0.0;
        double down = 0.0;
    };

    Ned to_ned_full(GeoPoint p) const;
    std::array<double, 2> to_ned(GeoPoint p) const;

    /// Point on the ellipsoid surface whose (north, east) projection is the
    /// given pair: the line through the plane point along the origin's down
    /// axis is intersected with the ellipsoid.
    GeoPoint to_geodetic(double north, double east) const;

private:
    GeoPoint origin_;
    Eigen::Vector3d origin_ecef_;
    Eigen::Matrix3d ecef_to_ned_;
};

/// WGS84 geodetic (h = 0) to ECEF, meters.
Eigen::Vector3d geodetic_to_ecef(GeoPoint p, double height = 0.0);

/// ECEF to WGS84 geodetic; height written to `height` when non-null.
GeoPoint ecef_to_geodetic(const Eigen::Vector3d& ecef, double* height = nullptr);

std::array<double, 2> geodetic_to_ned(GeoPoint p, const TangentPlane& plane);
GeoPoint ned_to_geodetic(double north, double east, const TangentPlane& plane);

/// [north m, east m, U m/s, chi rad]
struct PlanarState {
    double x = 0.0;
    double y = 0.0;
    double u = 0.0;
    double chi = 0.0;

    Vector4 vec() const { return {x, y, u, chi}; }
    static PlanarState from_vec(const Vector4& v) { return {v[0], v[1], v[2], v[3]}; }
};

/// f(x) = [U cos chi, U sin chi, 0, 0]
Vector4 ekf_dynamics(const PlanarState& s);

/// df/dx
Matrix4 ekf_jacobian(const PlanarState& s);

struct PlanarBelief {
    PlanarState state;
    Matrix4 cov = Matrix4::Zero();
};

/// Euler step x += f(x) dt, P = Phi P Phi^T + Q dt with Phi = I + A dt.
PlanarBelief ekf_predict(const PlanarBelief& b, double dt, const Matrix4& Q);

/// Identity observer with masked rows; the course residual is wrapped.
/// `meas.z` is in planar units (m, m, m/s, rad).
PlanarBelief ekf_update(const PlanarBelief& b, const Measurement& meas, const Matrix4& R);

struct EkfTuning {
    Matrix4 p0 = 0.1 * Matrix4::Identity();
    Matrix4 q = Vector4(0.01, 0.01, 0.1, 0.1).asDiagonal();
    Matrix4 r = Vector4(1e-3, 1e-3, 1e-3, 1e-2).asDiagonal();
};

/// Geodetic measurement (deg, deg, m/s, deg) to planar units. Position is
/// masked unless both lon and lat are present.
Measurement to_planar_measurement(const Measurement& geo, const TangentPlane& plane);

class PlanarEkf {
public:
    PlanarEkf(TangentPlane plane, EkfTuning tuning, PlanarBelief initial, double t);

    /// Starts at the measurement with P0 from the tuning.
    static PlanarEkf from_measurement(TangentPlane plane, EkfTuning tuning,
                                      const Measurement& geo_meas, double t);

    void predict(double dt);
    void predict_to(double t, double max_step);
    void update(const Measurement& geo_meas);

    const PlanarBelief& belief() const { return belief_; }
    double timestamp() const { return t_; }
    const TangentPlane& plane() const { return plane_; }

    /// Current estimate mapped back to (lon, lat, SOG, COG deg).
    GeodeticState geodetic_estimate() const;

private:
    TangentPlane plane_;
    EkfTuning tuning_;
    PlanarBelief belief_;
    double t_ = 0.0;
};

}  // namespace geotrack
