#include "geotrack/ekf.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "geotrack/errors.hpp"

namespace geotrack {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_pi(double rad) {
    return positive_mod(rad + std::numbers::pi, kTwoPi) - std::numbers::pi;
}

}  // namespace

Eigen::Vector3d geodetic_to_ecef(GeoPoint p, double height) {
    const double a = kWgs84SemiMajor;
    const double e2 = kWgs84Flattening * (2.0 - kWgs84Flattening);
    const double lat = p.lat * kDegToRad;
    const double lon = p.lon * kDegToRad;
    const double n = a / std::sqrt(1.0 - e2 * std::sin(lat) * std::sin(lat));
    return {(n + height) * std::cos(lat) * std::cos(lon), (n + height) * std::cos(lat) * std::sin(lon),
            (n * (1.0 - e2) + height) * std::sin(lat)};
}

GeoPoint ecef_to_geodetic(const Eigen::Vector3d& r, double* height) {
    const double a = kWgs84SemiMajor;
    const double e2 = kWgs84Flattening * (2.0 - kWgs84Flattening);
    const double p = std::hypot(r.x(), r.y());
    const double lon = std::atan2(r.y(), r.x());

    // fixed-point iteration on latitude; converges to machine precision near the surface
    double lat = std::atan2(r.z(), p * (1.0 - e2));
    double h = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double s = std::sin(lat);
        const double n = a / std::sqrt(1.0 - e2 * s * s);
        h = std::abs(std::cos(lat)) > 1e-10 ? p / std::cos(lat) - n : std::abs(r.z()) / std::abs(s) - n * (1.0 - e2);
        const double next = std::atan2(r.z(), p * (1.0 - e2 * n / (n + h)));
        if (std::abs(next - lat) < 1e-15) {
            lat = next;
            break;
        }
        lat = next;
    }
    if (height != nullptr) {
        const double s = std::sin(lat);
        *height = p * std::cos(lat) + r.z() * s - a * std::sqrt(1.0 - e2 * s * s);
    }
    return {normalize_lon(lon * kRadToDeg), lat * kRadToDeg};
}

TangentPlane::TangentPlane(GeoPoint origin) : origin_(GeoPoint::make(origin.lon, origin.lat)) {
    origin_ecef_ = geodetic_to_ecef(origin_);
    const double lat = origin_.lat * kDegToRad;
    const double lon = origin_.lon * kDegToRad;
    const double sl = std::sin(lat);
    const double cl = std::cos(lat);
    const double so = std::sin(lon);
    const double co = std::cos(lon);
    // rows: north, east, down
    ecef_to_ned_ << -sl * co, -sl * so, cl,
                    -so,      co,       0.0,
                    -cl * co, -cl * so, -sl;
}

TangentPlane::Ned TangentPlane::to_ned_full(GeoPoint p) const {
    const Eigen::Vector3d ned = ecef_to_ned_ * (geodetic_to_ecef(p) - origin_ecef_);
    return {ned.x(), ned.y(), ned.z()};
}

std::array<double, 2> TangentPlane::to_ned(GeoPoint p) const {
    const Ned n = to_ned_full(p);
    return {n.north, n.east};
}

GeoPoint TangentPlane::to_geodetic(double north, double east) const {
    const Eigen::Matrix3d ned_to_ecef = ecef_to_ned_.transpose();
    const Eigen::Vector3d base = origin_ecef_ + ned_to_ecef * Eigen::Vector3d(north, east, 0.0);
    const Eigen::Vector3d down = ned_to_ecef.col(2);

    // (x^2 + y^2) / a^2 + z^2 / b^2 = 1 along base + d * down
    const double a2 = kWgs84SemiMajor * kWgs84SemiMajor;
    const double b = kWgs84SemiMajor * (1.0 - kWgs84Flattening);
    const double b2 = b * b;
    const Eigen::Vector3d w(1.0 / a2, 1.0 / a2, 1.0 / b2);
    const double qa = (down.cwiseProduct(down)).dot(w);
    const double qb = 2.0 * (base.cwiseProduct(down)).dot(w);
    const double qc = (base.cwiseProduct(base)).dot(w) - 1.0;
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc < 0.0) {
        throw DomainError("tangent plane: point does not project onto the ellipsoid");
    }
    // root nearest the plane, in the cancellation-free form
    const double q = -0.5 * (qb + std::copysign(std::sqrt(disc), qb));
    double d1 = q / qa;
    double d2 = q != 0.0 ? qc / q : d1;
    const double d = std::abs(d1) < std::abs(d2) ? d1 : d2;
    return ecef_to_geodetic(base + d * down);
}

std::array<double, 2> geodetic_to_ned(GeoPoint p, const TangentPlane& plane) {
    return plane.to_ned(p);
}

GeoPoint ned_to_geodetic(double north, double east, const TangentPlane& plane) {
    return plane.to_geodetic(north, east);
}

Vector4 ekf_dynamics(const PlanarState& s) {
    return {s.u * std::cos(s.chi), s.u * std::sin(s.chi), 0.0, 0.0};
}

Matrix4 ekf_jacobian(const PlanarState& s) {
    Matrix4 a = Matrix4::Zero();
    a(0, 2) = std::cos(s.chi);
    a(0, 3) = -s.u * std::sin(s.chi);
    a(1, 2) = std::sin(s.chi);
    a(1, 3) = s.u * std::cos(s.chi);
    return a;
}

PlanarBelief ekf_predict(const PlanarBelief& b, double dt, const Matrix4& Q) {
    if (!(dt > 0.0)) {
        throw DomainError("ekf_predict: dt must be positive");
    }
    const Matrix4 phi = Matrix4::Identity() + ekf_jacobian(b.state) * dt;
    PlanarBelief out;
    out.state = PlanarState::from_vec(b.state.vec() + ekf_dynamics(b.state) * dt);
    out.cov = symmetrized(phi * b.cov * phi.transpose() + Q * dt);
    return out;
}

PlanarBelief ekf_update(const PlanarBelief& b, const Measurement& meas, const Matrix4& R) {
    if (!meas.any()) {
        return b;
    }
    Matrix4 H = Matrix4::Zero();
    Vector4 y = Vector4::Zero();
    const Vector4 x = b.state.vec();
    for (int j = 0; j < 4; ++j) {
        if (meas.mask[static_cast<std::size_t>(j)]) {
            H(j, j) = 1.0;
            y[j] = meas.z[j] - x[j];
        }
    }
    if (meas.mask[3]) {
        y[3] = wrap_pi(meas.z[3] - x[3]);
    }
    const Matrix4 S = H * b.cov * H.transpose() + R;
    Eigen::LLT<Matrix4> llt(S);
    if (llt.info() != Eigen::Success || !S.allFinite()) {
        throw SingularInnovation("ekf_update: innovation covariance is not positive definite");
    }
    const Matrix4 K = llt.solve(H * b.cov).transpose();
    const Matrix4 I_KH = Matrix4::Identity() - K * H;

    PlanarBelief out;
    out.state = PlanarState::from_vec(x + K * y);
    out.state.chi = positive_mod(out.state.chi, kTwoPi);
    out.cov = symmetrized(I_KH * b.cov * I_KH.transpose() + K * R * K.transpose());
    return out;
}

Measurement to_planar_measurement(const Measurement& geo, const TangentPlane& plane) {
    Measurement m;
    m.mask = geo.mask;
    m.z = Vector4::Zero();
    if (geo.mask[idx::lon] && geo.mask[idx::lat]) {
        const auto ne = plane.to_ned({geo.z[idx::lon], geo.z[idx::lat]});
        m.z[0] = ne[0];
        m.z[1] = ne[1];
    } else {
        m.mask[0] = false;
        m.mask[1] = false;
    }
    if (geo.mask[idx::sog]) {
        m.z[2] = geo.z[idx::sog];
    }
    if (geo.mask[idx::cog]) {
        m.z[3] = geo.z[idx::cog] * kDegToRad;
    }
    return m;
}

PlanarEkf::PlanarEkf(TangentPlane plane, EkfTuning tuning, PlanarBelief initial, double t)
    : plane_(std::move(plane)), tuning_(std::move(tuning)), belief_(std::move(initial)), t_(t) {}

PlanarEkf PlanarEkf::from_measurement(TangentPlane plane, EkfTuning tuning, const Measurement& geo_meas,
                                      double t) {
    const Measurement m = to_planar_measurement(geo_meas, plane);
    PlanarBelief b;
    b.state = PlanarState::from_vec(m.z);
    b.cov = tuning.p0;
    return PlanarEkf(std::move(plane), std::move(tuning), b, t);
}

void PlanarEkf::predict(double dt) {
    belief_ = ekf_predict(belief_, dt, tuning_.q);
    t_ += dt;
}

void PlanarEkf::predict_to(double t, double max_step) {
    while (t - t_ > 1e-9) {
        predict(std::min(max_step, t - t_));
    }
    if (t > t_) {
        t_ = t;
    }
}

void PlanarEkf::update(const Measurement& geo_meas) {
    belief_ = ekf_update(belief_, to_planar_measurement(geo_meas, plane_), tuning_.r);
}

GeodeticState PlanarEkf::geodetic_estimate() const {
    const GeoPoint p = plane_.to_geodetic(belief_.state.x, belief_.state.y);
    return GeodeticState{p.lon, p.lat, belief_.state.u, belief_.state.chi * kRadToDeg}.normalized();
}

}  // namespace geotrack
