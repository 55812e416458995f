#pragma once

// Noise covariances for the geodetic filter and the linear-wave kinematics
// used to size them.

#include <array>
#include <span>

#include "geotrack/linalg.hpp"

namespace geotrack {

/// Diagonal measurement noise covariance in state units
/// (deg^2, deg^2, (m/s)^2, deg^2).
class MeasurementNoise {
public:
    /// Throws DomainError unless every standard deviation is finite and > 0.
    static MeasurementNoise from_std(const Vector4& std_devs);
    static MeasurementNoise from_variances(const Vector4& variances);

    const Matrix4& matrix() const { return matrix_; }
    Vector4 std_devs() const { return matrix_.diagonal().cwiseSqrt(); }

private:
    explicit MeasurementNoise(const Matrix4& m) : matrix_(m) {}
    Matrix4 matrix_;
};

/// Receiver-derived AIS noise: 1.90e-5 deg lon, 1.45e-5 deg lat, 0.05 m/s, 0.2 deg.
MeasurementNoise default_measurement_noise();

/// How the position diagonal of Q scales with the step length.
enum class PositionDtScaling {
    AsPrinted,  ///< sigma^2 * dt inside the matrix, whole matrix times dt (dt^2 overall)
    Single,     ///< sigma^2 * dt overall
};

struct ProcessNoiseParams {
    double zeta0 = 2.0;        ///< reference wave-induced excursion [m]
    double a0 = 111319.5;      ///< meters per degree of longitude at the equator
    double sigma_u = 0.08;     ///< [m/s]
    double sigma_alpha = 1.2;  ///< [deg]
    PositionDtScaling position_scaling = PositionDtScaling::AsPrinted;

    /// Throws DomainError unless all magnitudes are finite and strictly positive.
    void validate() const;
};

/// zeta0 / (a0 cos(lat)) in degrees. Throws DomainError for |lat| >= 90.
double longitude_sigma(const ProcessNoiseParams& params, double lat_deg);

/// zeta0 / a0 in degrees.
double latitude_sigma(const ProcessNoiseParams& params);

/// Latitude- and course-dependent process noise Q_k.
///
/// Cross terms between SOG and position follow the course: the lon/U entry is
/// (sigma_lon sin(cog))^2 and the lat/U entry (sigma_lat cos(cog))^2. The
/// result is symmetric and projected to the nearest PSD matrix if needed.
/// Throws DomainError for |lat| >= 90 or dt <= 0.
Matrix4 build_process_noise(const ProcessNoiseParams& params, double lat_deg, double cog_deg,
                            double dt);

inline constexpr double kStandardGravity = 9.80665;
inline constexpr double kDeepWaterDepth = 1000.0;

struct WaveKinematics {
    double height = 0.0;     ///< H [m]
    double period = 0.0;     ///< T [s]
    double zeta = 0.0;       ///< orbital radius magnitude [m]
    double u_max = 0.0;      ///< peak orbital velocity [m/s]
    double wavenumber = 0.0; ///< k [rad/m]
};

/// Solves omega^2 = g k tanh(k h) for k by bisection (relative tolerance 1e-12).
double solve_wavenumber(double period, double depth, double g = kStandardGravity);

/// Orbital radius and peak velocity of a progressive linear wave.
/// Throws DomainError unless H >= 0, T > 0, depth > 0.
WaveKinematics wave_orbital_kinematics(double height, double period,
                                       double depth = kDeepWaterDepth,
                                       double g = kStandardGravity);

/// A fully developed sea state (Pierson-Moskowitz) with its published kinematics.
struct SeaState {
    int beaufort;
    double hs;         ///< significant wave height [m]
    double tp;         ///< peak period [s]
    double zeta_ref;   ///< tabulated orbital radius [m]
    double u_max_ref;  ///< tabulated orbital velocity [m/s]
};

/// Beaufort 4 through 10.
std::span<const SeaState> reference_sea_states();

}  // namespace geotrack
