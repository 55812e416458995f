#include "geotrack/study.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <numbers>
#include <ostream>
#include <thread>

#include "geotrack/errors.hpp"

namespace geotrack {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

double unit_from(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

// Runs fn(i) for i in [0, n) on `threads` workers; rethrows the first failure.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn fn) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(n);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

double quantile(std::vector<double> v, double q) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace

unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<SphereErrorSample> sphere_error_study(const SphereErrorParams& p) {
    if (!(p.min_distance > 0.0) || !(p.max_distance >= p.min_distance) || !(p.radius > 0.0)) {
        throw DomainError("sphere error study: need 0 < min_distance <= max_distance");
    }
    const std::vector<GeoPoint> starts = sample_uniform_sphere(p.samples, p.seed);
    const EarthModel wgs84 = EarthModel::wgs84();
    const double log_lo = std::log(p.min_distance);
    const double log_hi = std::log(p.max_distance);

    std::vector<SphereErrorSample> out(p.samples);
    parallel_for(p.samples, resolve_threads(p.threads), [&](std::size_t i) {
        const std::uint64_t h = splitmix64(p.seed ^ splitmix64(i));
        SphereErrorSample s;
        s.start = starts[i];
        s.bearing = 360.0 * unit_from(h);
        s.distance = std::exp(log_lo + (log_hi - log_lo) * unit_from(splitmix64(h)));
        const GeoPoint sphere_end = propagate_sphere(s.start, s.bearing, s.distance, p.radius);
        const GeoPoint ellipsoid_end = vincenty_direct(s.start, s.bearing, s.distance, wgs84).destination;
        s.error_m = geodesic_distance(sphere_end, ellipsoid_end, wgs84);
        s.normalized = s.error_m / s.distance;
        out[i] = s;
    });
    return out;
}

SphereErrorSummary summarize(const std::vector<SphereErrorSample>& samples, double short_limit) {
    SphereErrorSummary s;
    s.samples = samples.size();
    s.short_limit = short_limit;
    std::vector<double> norm;
    norm.reserve(samples.size());
    for (const auto& x : samples) {
        norm.push_back(x.normalized);
        s.max_normalized = std::max(s.max_normalized, x.normalized);
        if (x.distance <= short_limit) {
            ++s.short_samples;
            s.max_error_short_m = std::max(s.max_error_short_m, x.error_m);
            if (x.error_m >= 1.0) ++s.short_over_1m;
        }
    }
    s.p75_normalized = quantile(norm, 0.75);
    s.median_normalized = quantile(norm, 0.5);
    return s;
}

void write_sphere_error_csv(std::ostream& os, const std::vector<SphereErrorSample>& samples) {
    os << "lon_deg,lat_deg,bearing_deg,distance_m,error_m,normalized_error\n";
    char buf[256];
    for (const auto& s : samples) {
        std::snprintf(buf, sizeof buf, "%.9f,%.9f,%.6f,%.6f,%.9e,%.9e\n", s.start.lon, s.start.lat, s.bearing,
                      s.distance, s.error_m, s.normalized);
        os << buf;
    }
}

std::vector<PlaneErrorRow> plane_error_grid(const PlaneErrorParams& p) {
    if (p.l_steps < 2 || p.gamma_steps < 2 || !(p.max_l > 0.0) || !(p.max_l < p.radius)) {
        throw DomainError("plane error grid: need >= 2 steps and 0 < max_l < R");
    }
    std::vector<PlaneErrorRow> rows;
    for (std::size_t i = 0; i < p.l_steps; ++i) {
        const double l1 = p.max_l * static_cast<double>(i) / static_cast<double>(p.l_steps - 1);
        for (std::size_t j = 0; j < p.l_steps; ++j) {
            const double l2 = p.max_l * static_cast<double>(j) / static_cast<double>(p.l_steps - 1);
            for (std::size_t k = 0; k < p.gamma_steps; ++k) {
                const double g = std::numbers::pi * static_cast<double>(k) / static_cast<double>(p.gamma_steps - 1);
                rows.push_back({l1, l2, g, tangent_plane_separation_error(l1, l2, g, p.radius)});
            }
        }
    }
    return rows;
}

void write_plane_error_csv(std::ostream& os, const std::vector<PlaneErrorRow>& rows) {
    os << "l1_m,l2_m,gamma_rad,delta_l_m,delta_s_m,epsilon_m\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.3f,%.3f,%.9f,%.6f,%.6f,%.9f\n", r.l1, r.l2, r.gamma, r.err.delta_L,
                      r.err.delta_s, r.err.epsilon);
        os << buf;
    }
}

std::vector<WaveTableRow> wave_table(double depth) {
    std::vector<WaveTableRow> rows;
    for (const SeaState& s : reference_sea_states()) {
        WaveTableRow r;
        r.ref = s;
        r.computed = wave_orbital_kinematics(s.hs, s.tp, depth);
        r.zeta_rel_err = std::abs(r.computed.zeta - s.zeta_ref) / s.zeta_ref;
        r.u_rel_err = std::abs(r.computed.u_max - s.u_max_ref) / s.u_max_ref;
        rows.push_back(r);
    }
    return rows;
}

void write_wave_table_csv(std::ostream& os, const std::vector<WaveTableRow>& rows) {
    os << "beaufort,hs_m,tp_s,zeta_m,u_max_mps,zeta_ref_m,u_max_ref_mps,zeta_rel_err,u_rel_err\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%d,%.2f,%.2f,%.4f,%.4f,%.2f,%.2f,%.4f,%.4f\n", r.ref.beaufort, r.ref.hs,
                      r.ref.tp, r.computed.zeta, r.computed.u_max, r.ref.zeta_ref, r.ref.u_max_ref, r.zeta_rel_err,
                      r.u_rel_err);
        os << buf;
    }
}

std::vector<SweepRow> lawnmower_sweep(const std::vector<double>& intervals, int sections, std::uint64_t seed,
                                      unsigned threads) {
    std::vector<SweepRow> rows(intervals.size());
    parallel_for(intervals.size(), resolve_threads(threads), [&](std::size_t i) {
        Scenario s = lawnmower_scenario(intervals[i], sections);
        s.seed = seed;
        const ComparisonResult r = run_comparison(s);
        rows[i] = {intervals[i], r.ukf, r.ekf};
    });
    return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << "ais_interval_s,ukf_pos_rmse_m,ekf_pos_rmse_m,ukf_lon_rmse,ukf_lat_rmse,ukf_sog_rmse,ukf_cog_rmse,"
          "ekf_lon_rmse,ekf_lat_rmse,ekf_sog_rmse,ekf_cog_rmse,ukf_trace_max,ukf_trace_median,"
          "ekf_trace_max,ekf_trace_median\n";
    char buf[512];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf,
                      "%.1f,%.4f,%.4f,%.6e,%.6e,%.4f,%.4f,%.6e,%.6e,%.4f,%.4f,%.6e,%.6e,%.6e,%.6e\n",
                      r.ais_interval, r.ukf.position_rmse_m, r.ekf.position_rmse_m, r.ukf.rmse[0], r.ukf.rmse[1],
                      r.ukf.rmse[2], r.ukf.rmse[3], r.ekf.rmse[0], r.ekf.rmse[1], r.ekf.rmse[2], r.ekf.rmse[3],
                      r.ukf.trace_max, r.ukf.trace_median, r.ekf.trace_max, r.ekf.trace_median);
        os << buf;
    }
}

}  // namespace geotrack
