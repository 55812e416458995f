#pragma once

// Error studies: spherical vs ellipsoidal propagation, tangent-plane
// separation error, wave kinematics table, and the lawnmower interval sweep.

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "geotrack/geodesy.hpp"
#include "geotrack/noise.hpp"
#include "geotrack/sim.hpp"

namespace geotrack {

/// 0 means one worker per hardware thread.
unsigned resolve_threads(unsigned requested);

struct SphereErrorParams {
    std::size_t samples = 100000;
    std::uint64_t seed = 1;
    double min_distance = 1.0;      ///< m, log-uniform lower bound
    double max_distance = 500.0e3;  ///< m, log-uniform upper bound
    double radius = kMeanEarthRadius;
    unsigned threads = 0;
};

struct SphereErrorSample {
    GeoPoint start;
    double bearing = 0.0;
    double distance = 0.0;
    double error_m = 0.0;     ///< sphere vs ellipsoid end-point separation
    double normalized = 0.0;  ///< error_m / distance
};

struct SphereErrorSummary {
    std::size_t samples = 0;
    double max_normalized = 0.0;
    double p75_normalized = 0.0;
    double median_normalized = 0.0;
    double max_error_short_m = 0.0;  ///< over distances <= short_limit
    std::size_t short_samples = 0;
    std::size_t short_over_1m = 0;
    double short_limit = 200.0;
};

/// Monte Carlo of propagate_sphere against vincenty_direct from uniformly
/// distributed starts, uniform bearings and log-uniform distances. The
/// result does not depend on the thread count.
std::vector<SphereErrorSample> sphere_error_study(const SphereErrorParams& p);
SphereErrorSummary summarize(const std::vector<SphereErrorSample>& samples, double short_limit = 200.0);
void write_sphere_error_csv(std::ostream& os, const std::vector<SphereErrorSample>& samples);

struct PlaneErrorParams {
    double max_l = 100.0e3;
    std::size_t l_steps = 11;
    std::size_t gamma_steps = 13;
    double radius = kMeanEarthRadius;
};

struct PlaneErrorRow {
    double l1 = 0.0;
    double l2 = 0.0;
    double gamma = 0.0;
    SeparationError err;
};

/// Grid over L1, L2 in [0, max_l] and gamma in [0, pi].
std::vector<PlaneErrorRow> plane_error_grid(const PlaneErrorParams& p);
void write_plane_error_csv(std::ostream& os, const std::vector<PlaneErrorRow>& rows);

struct WaveTableRow {
    SeaState ref;
    WaveKinematics computed;
    double zeta_rel_err = 0.0;
    double u_rel_err = 0.0;
};

std::vector<WaveTableRow> wave_table(double depth = kDeepWaterDepth);
void write_wave_table_csv(std::ostream& os, const std::vector<WaveTableRow>& rows);

struct SweepRow {
    double ais_interval = 0.0;
    RunMetrics ukf;
    RunMetrics ekf;
};

/// Lawnmower runs for each AIS interval, in parallel, results in input order.
std::vector<SweepRow> lawnmower_sweep(const std::vector<double>& intervals, int sections = 10,
                                      std::uint64_t seed = 1, unsigned threads = 0);
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

}  // namespace geotrack
