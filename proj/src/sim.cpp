#include "geotrack/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <random>

#include "geotrack/ais.hpp"
#include "geotrack/errors.hpp"

namespace geotrack {

namespace {

constexpr std::uint64_t kMeasurementStream = 0x9E3779B97F4A7C15ULL;

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    return *mid;
}

struct Accumulator {
    Vector4 sq = Vector4::Zero();
    double pos_sq = 0.0;
    std::size_t inside = 0;
    std::size_t count = 0;
    std::vector<double> traces;  // a priori, one per update

    void add(const GeodeticState& est, const GeodeticState& truth, double err_m, double sigma3) {
        const Vector4 d(normalize_lon(est.lon - truth.lon), est.lat - truth.lat, est.sog - truth.sog,
                        wrap_residual(truth.cog, est.cog));
        sq += d.cwiseProduct(d);
        pos_sq += err_m * err_m;
        if (err_m <= sigma3) ++inside;
        ++count;
    }

    RunMetrics finish() const {
        RunMetrics m;
        m.steps = count;
        if (m.steps == 0) return m;
        const double n = static_cast<double>(m.steps);
        m.rmse = (sq / n).cwiseSqrt();
        m.position_rmse_m = std::sqrt(pos_sq / n);
        m.within_3sigma = static_cast<double>(inside) / n;
        if (!traces.empty()) {
            m.trace_max = *std::max_element(traces.begin(), traces.end());
            m.trace_median = median(traces);
        }
        return m;
    }
};

}  // namespace

std::vector<TruthSample> generate_truth(const Scenario& s) {
    s.validate();
    const double dt = 1.0 / s.truth_rate_hz;
    const auto n = static_cast<std::size_t>(std::floor(s.duration() * s.truth_rate_hz + 1e-9));

    std::mt19937_64 rng(s.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<TruthSample> out;
    out.reserve(n);
    GeoPoint pos = s.start;
    double cog_nominal = normalize_bearing(s.initial_cog);
    std::size_t seg = 0;
    double seg_end = s.segments[0].duration;
    double t = 0.0;

    for (std::size_t i = 0; i < n; ++i) {
        t = static_cast<double>(i) * dt;
        const double du = s.sog_jitter * gauss(rng);
        const double dcog = s.cog_jitter * gauss(rng);
        const double sog = std::max(0.0, s.segments[std::min(seg, s.segments.size() - 1)].speed + du);
        out.push_back({t, GeodeticState{pos.lon, pos.lat, sog, normalize_bearing(cog_nominal + dcog)}});

        // integrate to the next sample, splitting the step at segment boundaries
        double tc = t;
        double remaining = dt;
        while (remaining > 1e-12 && seg < s.segments.size()) {
            const TrajectorySegment& g = s.segments[seg];
            const double h = std::min(remaining, seg_end - tc);
            const double course = normalize_bearing(cog_nominal + dcog);
            const double speed = std::max(0.0, g.speed + du);
            const GeodesicSolution step = propagate_sphere_full(pos, course, speed * h, kMeanEarthRadius);
            pos = step.destination;
            if (g.kind == TrajectorySegment::Kind::Straight) {
                cog_nominal = normalize_bearing(cog_nominal + wrap_residual(course, step.final_bearing));
            } else {
                cog_nominal = normalize_bearing(cog_nominal + g.turn_rate * h);
            }
            tc += h;
            remaining -= h;
            if (tc >= seg_end - 1e-9) {
                ++seg;
                if (seg < s.segments.size()) seg_end += s.segments[seg].duration;
            }
        }
    }
    return out;
}

std::vector<TimedMeasurement> sample_ais(const std::vector<TruthSample>& truth, const Scenario& s) {
    std::vector<TimedMeasurement> out;
    if (truth.empty()) return out;
    std::mt19937_64 rng(s.seed ^ kMeasurementStream);
    std::normal_distribution<double> gauss(0.0, 1.0);

    const double t0 = truth.front().t;
    for (std::size_t m = 0;; ++m) {
        const double t = t0 + static_cast<double>(m) * s.ais_interval;
        const auto k = static_cast<std::size_t>(std::llround((t - t0) * s.truth_rate_hz));
        if (k >= truth.size()) break;
        const GeodeticState& x = truth[k].state;
        GeodeticState z;
        z.lon = x.lon + s.measurement_std[0] * gauss(rng);
        z.lat = x.lat + s.measurement_std[1] * gauss(rng);
        z.sog = std::max(0.0, x.sog + s.measurement_std[2] * gauss(rng));
        z.cog = normalize_bearing(x.cog + s.measurement_std[3] * gauss(rng));
        out.push_back({truth[k].t, Measurement::full(z.normalized())});
    }
    return out;
}

ComparisonResult run_comparison(const Scenario& s, const ComparisonOptions& opts) {
    const std::vector<TruthSample> truth = generate_truth(s);
    const std::vector<TimedMeasurement> meas = sample_ais(truth, s);
    if (meas.empty()) throw DomainError("run_comparison: no measurements");

    const EarthModel wgs84 = EarthModel::wgs84();
    const double max_step = 1.0 / s.filter_rate_hz;
    const double t_start = meas.front().t;

    GeodeticUkf ukf = GeodeticUkf::from_measurement(opts.ukf, meas.front().meas, t_start,
                                                    opts.ukf.measurement.matrix());
    PlanarEkf ekf = PlanarEkf::from_measurement(TangentPlane(opts.plane_origin), opts.ekf, meas.front().meas, t_start);

    ComparisonResult result;
    Accumulator acc_ukf;
    Accumulator acc_ekf;
    std::size_t next = 1;
    const double t_end = truth.back().t;

    for (std::size_t k = 0;; ++k) {
        const double t = t_start + static_cast<double>(k) * max_step;
        if (t > t_end + 1e-9) break;
        // Traces are logged a priori (just before any update landing on this
        // step) so update and non-update steps are comparable.
        std::optional<double> ukf_prior_trace;
        std::optional<double> ekf_prior_trace;
        while (next < meas.size() && meas[next].t <= t + 1e-9) {
            if (opts.run_ukf) {
                ukf.predict_to(meas[next].t, max_step);
                ukf_prior_trace = ukf.belief().cov.trace();
                acc_ukf.traces.push_back(*ukf_prior_trace);
                ukf.update(meas[next].meas);
            }
            if (opts.run_ekf) {
                ekf.predict_to(meas[next].t, max_step);
                ekf_prior_trace = ekf.belief().cov.trace();
                acc_ekf.traces.push_back(*ekf_prior_trace);
                ekf.update(meas[next].meas);
            }
            ++next;
        }
        if (opts.run_ukf) ukf.predict_to(t, max_step);
        if (opts.run_ekf) ekf.predict_to(t, max_step);

        const auto ti = static_cast<std::size_t>(std::llround(t * s.truth_rate_hz));
        if (ti >= truth.size()) break;
        RunStep step;
        step.t = t;
        step.truth = truth[ti].state;

        if (opts.run_ukf) {
            const GaussianBelief& b = ukf.belief();
            step.ukf = b.mean;
            step.err_ukf_m = geodesic_distance(step.truth.position(), b.mean.position(), wgs84);
            const double ky = kMeanEarthRadius * kDegToRad;
            const double kx = ky * std::cos(b.mean.lat * kDegToRad);
            step.sigma3_m = 3.0 * std::sqrt(b.cov(0, 0) * kx * kx + b.cov(1, 1) * ky * ky);
            step.ukf_trace = ukf_prior_trace.value_or(b.cov.trace());
            acc_ukf.add(step.ukf, step.truth, step.err_ukf_m, step.sigma3_m);
        }
        if (opts.run_ekf) {
            step.ekf = ekf.geodetic_estimate();
            step.err_ekf_m = geodesic_distance(step.truth.position(), step.ekf.position(), wgs84);
            const Matrix4& P = ekf.belief().cov;
            step.ekf_sigma3_m = 3.0 * std::sqrt(P(0, 0) + P(1, 1));
            step.ekf_trace = ekf_prior_trace.value_or(P.trace());
            acc_ekf.add(step.ekf, step.truth, step.err_ekf_m, step.ekf_sigma3_m);
        }
        result.steps.push_back(step);
    }
    result.ukf = acc_ukf.finish();
    result.ekf = acc_ekf.finish();
    return result;
}

void write_run_csv(std::ostream& os, const ComparisonResult& r) {
    os << "t,truth_lon,truth_lat,truth_sog,truth_cog,ukf_lon,ukf_lat,ukf_sog,ukf_cog,"
          "ekf_lon,ekf_lat,ekf_sog,ekf_cog,err_ukf_m,err_ekf_m,sigma3_m\n";
    char buf[512];
    for (const auto& st : r.steps) {
        std::snprintf(buf, sizeof buf,
                      "%.3f,%.9f,%.9f,%.4f,%.4f,%.9f,%.9f,%.4f,%.4f,%.9f,%.9f,%.4f,%.4f,%.4f,%.4f,%.4f\n", st.t,
                      st.truth.lon, st.truth.lat, st.truth.sog, st.truth.cog, st.ukf.lon, st.ukf.lat, st.ukf.sog,
                      st.ukf.cog, st.ekf.lon, st.ekf.lat, st.ekf.sog, st.ekf.cog, st.err_ukf_m, st.err_ekf_m,
                      st.sigma3_m);
        os << buf;
    }
}

double nominal_report_interval(int msg_type, std::optional<double> sog_mps) {
    const bool class_b = msg_type == 18;
    if (!sog_mps) return class_b ? 30.0 : 10.0;
    const double knots = *sog_mps / kKnotToMps;
    if (class_b) {
        if (knots < 2.0) return 180.0;
        if (knots <= 14.0) return 30.0;
        if (knots <= 23.0) return 15.0;
        return 5.0;
    }
    if (knots < 3.0) return 180.0;
    if (knots <= 14.0) return 10.0;
    if (knots <= 23.0) return 6.0;
    return 2.0;
}

std::string encode_position_report(std::uint32_t mmsi, const Measurement& m, int second) {
    BitVector b;
    b.append_uint(1, 6);
    b.append_uint(0, 2);
    b.append_uint(mmsi, 30);
    b.append_uint(0, 4);     // navigation status
    b.append_uint(0x80, 8);  // rate of turn not available
    const std::uint64_t sog = m.mask[idx::sog]
                                  ? static_cast<std::uint64_t>(std::min(1022.0, std::round(m.z[idx::sog] / kKnotToMps * 10.0)))
                                  : 1023;
    b.append_uint(sog, 10);
    b.append_uint(0, 1);
    const auto lon = m.mask[idx::lon] ? std::llround(m.z[idx::lon] * 600000.0) : 181LL * 600000;
    const auto lat = m.mask[idx::lat] ? std::llround(m.z[idx::lat] * 600000.0) : 91LL * 600000;
    b.append_uint(static_cast<std::uint64_t>(lon) & ((1ULL << 28) - 1), 28);
    b.append_uint(static_cast<std::uint64_t>(lat) & ((1ULL << 27) - 1), 27);
    const std::uint64_t cog =
        m.mask[idx::cog] ? static_cast<std::uint64_t>(std::llround(m.z[idx::cog] * 10.0)) % 3600 : 3600;
    b.append_uint(cog, 12);
    b.append_uint(511, 9);
    b.append_uint(static_cast<std::uint64_t>(second >= 0 && second < 60 ? second : 60), 6);
    b.append_uint(0, 2);
    b.append_uint(0, 3);
    b.append_uint(0, 1);
    b.append_uint(0, 19);

    const ArmoredPayload a = armor(b);
    NmeaSentence s;
    s.tag = "AIVDM";
    s.channel = "A";
    s.payload = a.payload;
    s.fill_bits = a.fill_bits;
    return format_sentence(s);
}

std::vector<std::string> simulated_nmea(const Scenario& s, const std::vector<TimedMeasurement>& meas,
                                        double epoch) {
    std::vector<std::string> lines;
    lines.reserve(meas.size());
    char tag[64];
    for (const auto& m : meas) {
        const double t = epoch + m.t;
        const int second = static_cast<int>(std::fmod(std::floor(t), 60.0));
        if (t == std::floor(t)) {
            std::snprintf(tag, sizeof tag, "c:%.0f", t);
        } else {
            std::snprintf(tag, sizeof tag, "c:%.3f", t);
        }
        char cs[4];
        std::snprintf(cs, sizeof cs, "%02X", nmea_checksum(tag));
        lines.push_back(std::string("\\") + tag + "*" + cs + "\\" + encode_position_report(s.mmsi, m.meas, second));
    }
    return lines;
}

}  // namespace geotrack
