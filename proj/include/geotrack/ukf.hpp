#pragma once

// Unscented Kalman filter whose state lives directly in geodetic coordinates:
// x = [lon deg, lat deg, SOG m/s, COG deg].
//
// Prediction pushes 2N+1 symmetric sigma points through the great-circle
// process model; the update is the ordinary linear Kalman update with an
// identity observer (rows zeroed for missing AIS fields) and Joseph-form
// covariance.

#include <array>
#include <cstddef>

#include "geotrack/geodesy.hpp"
#include "geotrack/linalg.hpp"
#include "geotrack/noise.hpp"

namespace geotrack {

inline constexpr int kStateDim = 4;
inline constexpr int kSigmaCount = 2 * kStateDim + 1;

namespace idx {
inline constexpr int lon = 0;
inline constexpr int lat = 1;
inline constexpr int sog = 2;
inline constexpr int cog = 3;
}  // namespace idx

struct GeodeticState {
    double lon = 0.0;  ///< [-180, 180)
    double lat = 0.0;  ///< [-90, 90]
    double sog = 0.0;  ///< m/s, >= 0
    double cog = 0.0;  ///< [0, 360)

    Vector4 vec() const { return {lon, lat, sog, cog}; }
    static GeodeticState from_vec(const Vector4& v) { return {v[0], v[1], v[2], v[3]}; }
    GeoPoint position() const { return {lon, lat}; }

    /// Wraps lon/cog and clamps lat into range.
    GeodeticState normalized() const;
};

struct GaussianBelief {
    GeodeticState mean;
    Matrix4 cov = Matrix4::Zero();
    double timestamp = 0.0;  ///< seconds
};

/// Constant acceleration / constant turn rate. Both zero gives constant velocity.
struct MotionModel {
    double accel = 0.0;      ///< m/s^2
    double turn_rate = 0.0;  ///< deg/s

    static MotionModel constant_velocity() { return {}; }
};

struct Measurement {
    Vector4 z = Vector4::Zero();
    std::array<bool, 4> mask{true, true, true, true};

    static Measurement full(const GeodeticState& s);

    /// Missing entries get value 0 so z always matches H x.
    Measurement& drop(int field);
    bool any() const { return mask[0] || mask[1] || mask[2] || mask[3]; }
};

struct SigmaPointSet {
    std::array<Vector4, kSigmaCount> points;
    std::array<double, kSigmaCount> weights;
};

/// Symmetric set: W0 = 1 - N/3, Wi = (1 - W0) / 2N, offsets are the columns of
/// the symmetric square root of (N / (1 - W0)) P. Throws FactorizationFailure
/// if P stays indefinite after PSD projection.
SigmaPointSet sigma_points(const GaussianBelief& belief);

/// Process model for one state. Negative speeds (possible on sigma points)
/// travel backwards along the course.
GeodeticState propagate_state(const GeodeticState& s, const MotionModel& model, double dt,
                              const EarthModel& earth);

/// A priori belief after dt seconds. Q is added in state units.
GaussianBelief predict(const GaussianBelief& belief, const MotionModel& model, double dt,
                       const Matrix4& Q, const EarthModel& earth);

struct UpdateResult {
    GaussianBelief posterior;
    Vector4 innovation = Vector4::Zero();   ///< z - H x (angles wrapped)
    Matrix4 innovation_cov = Matrix4::Zero();  ///< H P H^T + R
};

/// Linear update with masked identity observer and Joseph-form covariance.
/// Throws SingularInnovation if H P H^T + R cannot be inverted.
UpdateResult update_detailed(const GaussianBelief& prior, const Measurement& meas,
                             const MeasurementNoise& R);

GaussianBelief update(const GaussianBelief& prior, const Measurement& meas,
                      const MeasurementNoise& R);

/// Smallest signed angle from predicted to measured, in [-180, 180).
double wrap_residual(double predicted_deg, double measured_deg);

struct UkfConfig {
    EarthModel earth = EarthModel::sphere();
    MotionModel motion = MotionModel::constant_velocity();
    ProcessNoiseParams process;
    MeasurementNoise measurement = default_measurement_noise();
};

/// Diagonal prior used when a track starts from a single report: tight on
/// position, loose on SOG and COG.
Matrix4 default_initial_covariance();

/// Stateful filter wrapping predict/update with per-step Q_k.
class GeodeticUkf {
public:
    GeodeticUkf(UkfConfig config, GaussianBelief initial);

    /// Starts from a measurement: missing fields default to 0 with the wide
    /// default variance, present fields use `initial_cov`'s diagonal.
    static GeodeticUkf from_measurement(UkfConfig config, const Measurement& meas, double t,
                                        const Matrix4& initial_cov = default_initial_covariance());

    /// Advances the belief by dt (> 0) rebuilding Q_k at the current mean.
    void predict(double dt);

    /// Predicts in steps of at most max_step until the belief reaches t.
    void predict_to(double t, double max_step);

    UpdateResult update(const Measurement& meas);

    const GaussianBelief& belief() const { return belief_; }
    const UkfConfig& config() const { return config_; }

private:
    UkfConfig config_;
    GaussianBelief belief_;
};

}  // namespace geotrack
