#include "geotrack/noise.hpp"

#include <cmath>
#include <numbers>

#include "geotrack/errors.hpp"
#include "geotrack/geodesy.hpp"

namespace geotrack {

MeasurementNoise MeasurementNoise::from_std(const Vector4& std_devs) {
    return from_variances(std_devs.cwiseProduct(std_devs));
}

MeasurementNoise MeasurementNoise::from_variances(const Vector4& variances) {
    for (int i = 0; i < 4; ++i) {
        if (!std::isfinite(variances[i]) || !(variances[i] > 0.0)) {
            throw DomainError("MeasurementNoise: variances must be finite and positive");
        }
    }
    Matrix4 m = Matrix4::Zero();
    m.diagonal() = variances;
    return MeasurementNoise(m);
}

MeasurementNoise default_measurement_noise() {
    return MeasurementNoise::from_std(Vector4(1.90e-5, 1.45e-5, 0.05, 0.2));
}

void ProcessNoiseParams::validate() const {
    for (double v : {zeta0, a0, sigma_u, sigma_alpha}) {
        if (!std::isfinite(v) || !(v > 0.0)) {
            throw DomainError("ProcessNoiseParams: all parameters must be finite and positive");
        }
    }
}

double longitude_sigma(const ProcessNoiseParams& params, double lat_deg) {
    if (!(std::abs(lat_deg) < 90.0)) {
        throw DomainError("process noise: longitude spacing degenerates at |lat| >= 90");
    }
    return params.zeta0 / (params.a0 * std::cos(lat_deg * kDegToRad));
}

double latitude_sigma(const ProcessNoiseParams& params) { return params.zeta0 / params.a0; }

Matrix4 build_process_noise(const ProcessNoiseParams& params, double lat_deg, double cog_deg,
                            double dt) {
    params.validate();
    if (!(dt > 0.0)) {
        throw DomainError("process noise: dt must be positive");
    }
    const double s_lon = longitude_sigma(params, lat_deg);
    const double s_lat = latitude_sigma(params);
    const double alpha = cog_deg * kDegToRad;

    const double pos_dt = params.position_scaling == PositionDtScaling::AsPrinted ? dt : 1.0;
    const double lon_u = std::pow(s_lon * std::sin(alpha), 2);
    const double lat_u = std::pow(s_lat * std::cos(alpha), 2);

    Matrix4 q;
    // clang-format off
    q << s_lon * s_lon * pos_dt, 0.0,                    lon_u,                               0.0,
         0.0,                    s_lat * s_lat * pos_dt, lat_u,                               0.0,
         lon_u,                  lat_u,                  params.sigma_u * params.sigma_u,     0.0,
         0.0,                    0.0,                    0.0,                                 params.sigma_alpha * params.sigma_alpha;
    // clang-format on
    q *= dt;
    return nearest_psd(q);
}

double solve_wavenumber(double period, double depth, double g) {
    if (!(period > 0.0) || !(depth > 0.0) || !(g > 0.0)) {
        throw DomainError("wavenumber: period, depth and g must be positive");
    }
    const double omega = 2.0 * std::numbers::pi / period;
    const double w2 = omega * omega;
    auto residual = [&](double k) { return g * k * std::tanh(k * depth) - w2; };

    // residual is increasing in k; bracket between the shallow and deep limits.
    double lo = 0.0;
    double hi = std::max(w2 / g, omega / std::sqrt(g * depth)) * 2.0;
    while (residual(hi) < 0.0) {
        hi *= 2.0;
    }
    for (int i = 0; i < 400 && (hi - lo) > 1e-12 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (residual(mid) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

WaveKinematics wave_orbital_kinematics(double height, double period, double depth, double g) {
    if (!(height >= 0.0) || !(period > 0.0) || !(depth > 0.0)) {
        throw DomainError("wave kinematics: need H >= 0, T > 0, depth > 0");
    }
    const double k = solve_wavenumber(period, depth, g);
    const double coth = 1.0 / std::tanh(k * depth);

    WaveKinematics w;
    w.height = height;
    w.period = period;
    w.wavenumber = k;
    w.zeta = height / 2.0 * coth;
    w.u_max = g * period * height * k / (4.0 * std::numbers::pi) * coth;
    return w;
}

std::span<const SeaState> reference_sea_states() {
    static constexpr SeaState kTable[] = {
        {4, 1.0, 5.0, 0.5, 0.62},    {5, 2.0, 7.1, 1.0, 0.89},     {6, 3.3, 9.1, 1.65, 1.14},
        {7, 5.3, 11.5, 2.65, 1.45},  {8, 8.2, 14.3, 4.10, 1.80},   {9, 11.4, 16.9, 5.70, 2.12},
        {10, 15.5, 19.7, 7.75, 2.47},
    };
    return kTable;
}

}  // namespace geotrack
