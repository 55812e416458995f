#include "geotrack/ukf.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "geotrack/errors.hpp"

namespace geotrack {

namespace {

constexpr double kW0 = 1.0 - kStateDim / 3.0;
constexpr double kWi = (1.0 - kW0) / (2.0 * kStateDim);
constexpr double kSpread = kStateDim / (1.0 - kW0);

double wrap_signed(double deg) { return normalize_lon(deg); }

GeodeticState state_from_point(const Vector4& v) {
    return GeodeticState{v[idx::lon], v[idx::lat], v[idx::sog], v[idx::cog]}.normalized();
}

bool all_finite(const Matrix4& m) { return m.allFinite(); }

}  // namespace

GeodeticState GeodeticState::normalized() const {
    return {normalize_lon(lon), std::clamp(lat, -90.0, 90.0), sog, normalize_bearing(cog)};
}

Measurement Measurement::full(const GeodeticState& s) {
    Measurement m;
    m.z = s.vec();
    return m;
}

Measurement& Measurement::drop(int field) {
    mask[static_cast<std::size_t>(field)] = false;
    z[field] = 0.0;
    return *this;
}

double wrap_residual(double predicted_deg, double measured_deg) {
    return positive_mod(measured_deg - predicted_deg + 180.0, 360.0) - 180.0;
}

SigmaPointSet sigma_points(const GaussianBelief& belief) {
    if (!all_finite(belief.cov)) {
        throw FactorizationFailure("sigma_points: covariance has non-finite entries");
    }
    Matrix4 scaled = kSpread * symmetrized(belief.cov);

    Eigen::SelfAdjointEigenSolver<Matrix4> eig(scaled);
    if (eig.info() != Eigen::Success) {
        throw FactorizationFailure("sigma_points: eigen decomposition failed");
    }
    const double scale = std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
    if (eig.eigenvalues().minCoeff() < -1e-9 * scale) {
        eig.compute(nearest_psd(scaled));
        if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() < -1e-9 * scale) {
            throw FactorizationFailure("sigma_points: covariance indefinite after PSD projection");
        }
    }
    const Vector4 root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const Matrix4 offsets = eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().transpose();

    SigmaPointSet set;
    const Vector4 mean = belief.mean.vec();
    set.points[0] = mean;
    set.weights[0] = kW0;
    for (int i = 0; i < kStateDim; ++i) {
        set.points[static_cast<std::size_t>(1 + i)] = mean + offsets.col(i);
        set.points[static_cast<std::size_t>(1 + i + kStateDim)] = mean - offsets.col(i);
        set.weights[static_cast<std::size_t>(1 + i)] = kWi;
        set.weights[static_cast<std::size_t>(1 + i + kStateDim)] = kWi;
    }
    return set;
}

GeodeticState propagate_state(const GeodeticState& s, const MotionModel& model, double dt,
                              const EarthModel& earth) {
    double distance = s.sog * dt;
    double bearing = s.cog;
    if (distance < 0.0) {
        distance = -distance;
        bearing += 180.0;
    }
    bearing = normalize_bearing(bearing);

    GeoPoint next;
    if (earth.mode == EarthModel::Mode::Sphere) {
        next = propagate_sphere(s.position(), bearing, distance, earth.sphere_radius);
    } else {
        next = vincenty_direct(s.position(), bearing, distance, earth).destination;
    }

    double sog = s.sog + model.accel * dt;
    // deceleration stops the vessel rather than reversing it
    if (s.sog >= 0.0 && sog < 0.0) {
        sog = 0.0;
    }
    return GeodeticState{next.lon, next.lat, sog, normalize_bearing(s.cog + model.turn_rate * dt)};
}

GaussianBelief predict(const GaussianBelief& belief, const MotionModel& model, double dt,
                       const Matrix4& Q, const EarthModel& earth) {
    if (!(dt > 0.0)) {
        throw DomainError("predict: dt must be positive");
    }
    const SigmaPointSet sp = sigma_points(belief);

    std::array<GeodeticState, kSigmaCount> y;
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] = propagate_state(state_from_point(sp.points[i]), model, dt, earth);
    }

    // Longitude averaged as offsets from the central point so the
    // antimeridian does not split the cloud; COG averaged on the circle.
    const double lon_ref = y[0].lon;
    double lon_off = 0.0;
    double lat = 0.0;
    double sog = 0.0;
    double cog_s = 0.0;
    double cog_c = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double w = sp.weights[i];
        lon_off += w * wrap_signed(y[i].lon - lon_ref);
        lat += w * y[i].lat;
        sog += w * y[i].sog;
        cog_s += w * std::sin(y[i].cog * kDegToRad);
        cog_c += w * std::cos(y[i].cog * kDegToRad);
    }
    GeodeticState mean{lon_ref + lon_off, lat, sog, std::atan2(cog_s, cog_c) * kRadToDeg};
    mean = mean.normalized();

    Matrix4 cov = Q;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const Vector4 d(wrap_signed(y[i].lon - mean.lon), y[i].lat - mean.lat, y[i].sog - mean.sog,
                        wrap_residual(mean.cog, y[i].cog));
        cov += sp.weights[i] * d * d.transpose();
    }

    mean.sog = std::max(0.0, mean.sog);

    GaussianBelief out;
    out.mean = mean;
    out.cov = nearest_psd(cov);
    out.timestamp = belief.timestamp + dt;
    return out;
}

UpdateResult update_detailed(const GaussianBelief& prior, const Measurement& meas,
                             const MeasurementNoise& R) {
    UpdateResult result;
    result.posterior = prior;
    if (!meas.any()) {
        result.innovation_cov = R.matrix();
        return result;
    }

    Matrix4 H = Matrix4::Zero();
    Vector4 y = Vector4::Zero();
    const Vector4 x = prior.mean.vec();
    for (int j = 0; j < kStateDim; ++j) {
        if (!meas.mask[static_cast<std::size_t>(j)]) {
            continue;
        }
        H(j, j) = 1.0;
        y[j] = meas.z[j] - x[j];
    }
    if (meas.mask[idx::lon]) {
        y[idx::lon] = wrap_signed(meas.z[idx::lon] - x[idx::lon]);
    }
    if (meas.mask[idx::cog]) {
        y[idx::cog] = wrap_residual(x[idx::cog], meas.z[idx::cog]);
    }

    const Matrix4& P = prior.cov;
    const Matrix4 S = H * P * H.transpose() + R.matrix();
    Eigen::LLT<Matrix4> llt(S);
    if (llt.info() != Eigen::Success || !S.allFinite()) {
        throw SingularInnovation("update: innovation covariance is not positive definite");
    }
    // K = P H^T S^-1, solved as (S^-1 H P)^T with S and P symmetric
    const Matrix4 K = llt.solve(H * P).transpose();

    const Vector4 xp = x + K * y;
    GeodeticState post = GeodeticState::from_vec(xp).normalized();
    post.sog = std::max(0.0, post.sog);

    const Matrix4 I_KH = Matrix4::Identity() - K * H;
    const Matrix4 Pp = I_KH * P * I_KH.transpose() + K * R.matrix() * K.transpose();

    result.posterior.mean = post;
    result.posterior.cov = symmetrized(Pp);
    result.innovation = y;
    result.innovation_cov = S;
    return result;
}

GaussianBelief update(const GaussianBelief& prior, const Measurement& meas,
                      const MeasurementNoise& R) {
    return update_detailed(prior, meas, R).posterior;
}

Matrix4 default_initial_covariance() {
    return Vector4(1e-4 * 1e-4, 1e-4 * 1e-4, 1.0, 100.0 * 100.0).asDiagonal();
}

GeodeticUkf::GeodeticUkf(UkfConfig config, GaussianBelief initial)
    : config_(std::move(config)), belief_(std::move(initial)) {
    config_.earth.validate();
    config_.process.validate();
    belief_.mean = belief_.mean.normalized();
    belief_.cov = symmetrized(belief_.cov);
}

GeodeticUkf GeodeticUkf::from_measurement(UkfConfig config, const Measurement& meas, double t,
                                          const Matrix4& initial_cov) {
    GaussianBelief b;
    b.timestamp = t;
    b.mean = GeodeticState::from_vec(meas.z).normalized();
    b.mean.sog = std::max(0.0, b.mean.sog);
    b.cov = Matrix4::Zero();
    const Matrix4 wide = default_initial_covariance();
    for (int j = 0; j < kStateDim; ++j) {
        b.cov(j, j) = meas.mask[static_cast<std::size_t>(j)] ? initial_cov(j, j) : wide(j, j);
    }
    return GeodeticUkf(std::move(config), b);
}

void GeodeticUkf::predict(double dt) {
    const Matrix4 Q = build_process_noise(config_.process, belief_.mean.lat, belief_.mean.cog, dt);
    belief_ = geotrack::predict(belief_, config_.motion, dt, Q, config_.earth);
}

void GeodeticUkf::predict_to(double t, double max_step) {
    while (t - belief_.timestamp > 1e-9) {
        predict(std::min(max_step, t - belief_.timestamp));
    }
    if (t > belief_.timestamp) {
        belief_.timestamp = t;
    }
}

UpdateResult GeodeticUkf::update(const Measurement& meas) {
    UpdateResult r = update_detailed(belief_, meas, config_.measurement);
    belief_ = r.posterior;
    return r;
}

}  // namespace geotrack
