#pragma once

// Truth trajectories from straight and constant-turn segments, noisy AIS
// sampling, and the side-by-side UKF/EKF scoring harness.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geotrack/ekf.hpp"
#include "geotrack/ukf.hpp"

namespace geotrack {

struct TrajectorySegment {
    enum class Kind { Straight, Turn };
    Kind kind = Kind::Straight;
    double duration = 0.0;   ///< s
    double speed = 0.0;      ///< m/s
    double turn_rate = 0.0;  ///< deg/s, Turn only
};

struct Scenario {
    std::string name = "scenario";
    GeoPoint start = TangentPlane::kBostonOrigin;
    double initial_cog = 0.0;  ///< deg
    std::vector<TrajectorySegment> segments;
    double truth_rate_hz = 1.0;
    double filter_rate_hz = 1.0;
    double ais_interval = 6.0;  ///< s
    double sog_jitter = 0.1;    ///< std dev of truth SOG noise per step [m/s]
    double cog_jitter = 0.5;    ///< std dev of truth COG noise per step [deg]
    Vector4 measurement_std = Vector4(1.90e-5, 1.45e-5, 0.05, 0.2);
    std::uint64_t seed = 1;
    std::uint32_t mmsi = 440292000;

    double duration() const;

    /// Throws DomainError for a non-positive duration, negative speed or
    /// an AIS interval shorter than the truth step.
    void validate() const;
};

/// Reads `key = value` lines followed by a `[segments]` table of
/// `straight <duration> <speed>` and `turn <duration> <speed> <rate>` rows.
/// `repeat = n` repeats the segment table. '#' starts a comment.
/// Throws ParseError.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::string& path);
std::string format_scenario(const Scenario& s);

/// Eastbound harbor departure at 7 m/s with several constant-turn arcs.
Scenario boston_departure_scenario();

/// Straights of `leg_m` joined by alternating 180 degree turns of radius
/// `radius_m`, repeated `sections` times.
Scenario lawnmower_scenario(double ais_interval, int sections = 10, double leg_m = 855.0,
                            double radius_m = 50.0, double speed = 15.0);

struct TruthSample {
    double t = 0.0;
    GeodeticState state;
};

/// Advances the truth at truth_rate_hz. Each step draws SOG and COG jitter
/// and moves along the great circle with the jittered values; straight
/// segments keep to a great circle, turns add rate * dt to the course.
std::vector<TruthSample> generate_truth(const Scenario& s);

struct TimedMeasurement {
    double t = 0.0;
    Measurement meas;
};

/// Truth sampled every ais_interval with independent Gaussian noise on each
/// field; COG wrapped to [0, 360), SOG clamped at 0.
std::vector<TimedMeasurement> sample_ais(const std::vector<TruthSample>& truth, const Scenario& s);

struct RunMetrics {
    Vector4 rmse = Vector4::Zero();  ///< lon deg, lat deg, SOG m/s, COG deg
    double position_rmse_m = 0.0;
    double within_3sigma = 0.0;  ///< fraction of steps
    /// Covariance trace (mixed state units) just before each update. Sampling
    /// at the same phase of every report cycle keeps the between-report
    /// growth out of the divergence check.
    double trace_max = 0.0;
    double trace_median = 0.0;
    std::size_t steps = 0;
};

struct RunStep {
    double t = 0.0;
    GeodeticState truth;
    GeodeticState ukf;
    GeodeticState ekf;
    double err_ukf_m = 0.0;
    double err_ekf_m = 0.0;
    double sigma3_m = 0.0;  ///< UKF 3-sigma position bound
    double ekf_sigma3_m = 0.0;
    double ukf_trace = 0.0;  ///< a priori, before any update at this step
    double ekf_trace = 0.0;
};

struct ComparisonResult {
    RunMetrics ukf;
    RunMetrics ekf;
    std::vector<RunStep> steps;
};

struct ComparisonOptions {
    bool run_ukf = true;
    bool run_ekf = true;
    UkfConfig ukf;
    EkfTuning ekf;
    GeoPoint plane_origin = TangentPlane::kBostonOrigin;
};

/// Runs both filters at filter_rate_hz on one measurement stream. Each filter
/// starts from the first measurement; the UKF with P0 = R, the EKF with its
/// tuning's P0.
ComparisonResult run_comparison(const Scenario& s, const ComparisonOptions& opts = {});

void write_run_csv(std::ostream& os, const ComparisonResult& r);

/// Nominal reporting interval [s] for a dynamic report of this type at this
/// speed, holding course. Class A for types 1-3, Class B for 18.
double nominal_report_interval(int msg_type, std::optional<double> sog_mps);

/// Class A position report (type 1) as one AIVDM sentence; masked fields are
/// written as their not-available values. Used to replay simulated tracks
/// through the decoder.
std::string encode_position_report(std::uint32_t mmsi, const Measurement& m, int second);

/// Scenario measurements as AIVDM lines with a `c:` tag-block timestamp.
std::vector<std::string> simulated_nmea(const Scenario& s, const std::vector<TimedMeasurement>& meas,
                                        double epoch = 1.6e9);

}  // namespace geotrack
