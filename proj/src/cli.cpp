#include "geotrack/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>

#include "geotrack/errors.hpp"
#include "geotrack/sim.hpp"
#include "geotrack/study.hpp"

namespace geotrack {

namespace {

struct InputError : Error {
    using Error::Error;
};

std::uint64_t default_seed() {
    if (const char* env = std::getenv(kSeedEnvVar)) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0') return v;
    }
    return 1;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}

std::string opt_num(const std::optional<double>& v, const char* f) {
    if (!v) return {};
    char buf[64];
    std::snprintf(buf, sizeof buf, f, *v);
    return buf;
}

// Opens `path` for reading; "-" is the given fallback stream.
std::istream& open_input(const std::string& path, std::istream& fallback, std::unique_ptr<std::ifstream>& holder) {
    if (path == "-" || path.empty()) return fallback;
    holder = std::make_unique<std::ifstream>(path);
    if (!*holder) throw InputError("cannot read " + path);
    return *holder;
}

std::ostream& open_output(const std::string& path, std::ostream& fallback, std::unique_ptr<std::ofstream>& holder) {
    if (path == "-" || path.empty()) return fallback;
    holder = std::make_unique<std::ofstream>(path);
    if (!*holder) throw InputError("cannot write " + path);
    return *holder;
}

void print_decode_stats(std::ostream& err, const DecodeStats& s) {
    err << "lines=" << s.lines << " decoded=" << s.decoded << " blank=" << s.blank << " malformed=" << s.malformed
        << " checksum=" << s.checksum_failures << " unsupported=" << s.unsupported << " incomplete=" << s.incomplete
        << " conflicting=" << s.conflicting << " truncated=" << s.truncated << "\n";
}

void print_metrics(std::ostream& err, const char* label, const RunMetrics& m) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "%s rmse lon=%.3e deg lat=%.3e deg sog=%.4f m/s cog=%.4f deg pos=%.3f m within3sigma=%.4f\n", label,
                  m.rmse[0], m.rmse[1], m.rmse[2], m.rmse[3], m.position_rmse_m, m.within_3sigma);
    err << buf;
}

Scenario resolve_scenario(const std::string& name) {
    if (name == "boston" || name == "boston_departure") return boston_departure_scenario();
    if (name == "lawnmower") return lawnmower_scenario(6.0);
    return load_scenario(name);
}

}  // namespace

DecodeStats decode_stream(std::istream& in, std::ostream& out, const DecodeOptions& opts) {
    StreamDecoder dec(opts);
    out << "line,tag_time,msg_type,mmsi,lon_deg,lat_deg,sog_mps,cog_deg,heading_deg,second,"
           "imo,callsign,name,ship_type,to_bow,to_stern,to_port,to_starboard,fix_type,draught_m\n";
    std::string line;
    while (std::getline(in, line)) {
        const auto msg = dec.push_line(line);
        if (!msg) continue;
        out << msg->line_number << ',' << opt_num(msg->tag_time, "%.3f") << ',';
        if (const auto* d = std::get_if<DynamicAisReport>(&msg->report)) {
            out << d->msg_type << ',' << d->mmsi << ',' << opt_num(d->lon, "%.7f") << ',' << opt_num(d->lat, "%.7f")
                << ',' << opt_num(d->sog, "%.5f") << ',' << opt_num(d->cog, "%.1f") << ','
                << opt_num(d->heading, "%.0f") << ','
                << (d->timestamp_sec ? std::to_string(*d->timestamp_sec) : std::string()) << ",,,,,,,,,,\n";
        } else {
            const auto& s = std::get<StaticAisReport>(msg->report);
            char draught[32];
            std::snprintf(draught, sizeof draught, "%.1f", s.draught);
            out << s.msg_type << ',' << s.mmsi << ",,,,,,," << s.imo << ',' << csv_field(s.callsign) << ','
                << csv_field(s.name) << ',' << s.type_code << ',' << s.to_bow << ',' << s.to_stern << ','
                << s.to_port << ',' << s.to_starboard << ',' << s.fix_type << ',' << draught << '\n';
        }
    }
    dec.finish();
    return dec.stats();
}

ReplayStats replay_track(std::istream& in, std::ostream& out, const TrackerConfig& config,
                         const DecodeOptions& opts) {
    ReplayStats stats;
    StreamDecoder dec(opts);
    TrackTable table(config);
    const double step = 1.0 / config.filter_rate_hz;

    write_track_csv_header(out);
    double clock = 0.0;
    bool started = false;
    double next_tick = 0.0;
    double last_tick = -1.0;
    std::map<std::uint32_t, double> synthetic_last;

    auto emit_tick = [&](double t) {
        for (const auto& [mmsi, belief] : table.tick(t)) {
            write_track_csv_row(out, t, mmsi, belief);
            ++stats.rows;
        }
        last_tick = t;
    };

    std::string line;
    while (std::getline(in, line)) {
        const auto msg = dec.push_line(line, clock);
        if (!msg) continue;
        const auto* report = std::get_if<DynamicAisReport>(&msg->report);
        if (report == nullptr) continue;
        ++stats.reports;

        double t = 0.0;
        if (msg->tag_time) {
            t = *msg->tag_time;
        } else {
            const auto it = synthetic_last.find(report->mmsi);
            t = it == synthetic_last.end() ? clock
                                           : std::max(clock, it->second + nominal_report_interval(report->msg_type, report->sog));
            synthetic_last[report->mmsi] = t;
        }
        if (!started) {
            started = true;
            next_tick = std::ceil(t / step) * step;
        }
        if (table.size() == 0 && next_tick < t) {
            next_tick = std::ceil(t / step) * step;
        }
        while (next_tick < t) {
            emit_tick(next_tick);
            next_tick += step;
            if (table.size() == 0) next_tick = std::max(next_tick, std::ceil(t / step) * step);
        }
        clock = std::max(clock, t);

        const TrackEvent ev = table.ingest(*report, t);
        switch (ev.kind) {
            case TrackEventKind::Created: ++stats.created; break;
            case TrackEventKind::Updated: ++stats.updated; break;
            case TrackEventKind::DroppedStale: ++stats.stale; break;
            case TrackEventKind::NoPosition: ++stats.no_position; break;
        }
    }
    dec.finish();
    if (started && table.size() > 0) {
        while (next_tick <= clock) {
            emit_tick(next_tick);
            next_tick += step;
        }
        if (last_tick < clock) emit_tick(clock);
    }
    stats.decode = dec.stats();
    return stats;
}

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Geodetic vessel tracking toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "geotrack 0.1.0");

    const std::uint64_t seed_default = default_seed();

    // decode
    std::string dec_in = "-";
    std::string dec_out = "-";
    bool dec_paper_scaling = false;
    auto* decode = app.add_subcommand("decode", "Decode AIVDM sentences to CSV");
    decode->add_option("-i,--input", dec_in, "NMEA file, '-' for stdin");
    decode->add_option("-o,--output", dec_out, "CSV output, '-' for stdout");
    decode->add_flag("--paper-scaling", dec_paper_scaling, "Scale positions by 6e-5 instead of 1/600000");

    // track
    std::string trk_in = "-";
    std::string trk_out = "-";
    double trk_rate = 1.0;
    double trk_stale = 180.0;
    std::string trk_earth = "sphere";
    auto* track = app.add_subcommand("track", "Track every MMSI in an NMEA stream");
    track->add_option("-i,--input", trk_in, "NMEA file, '-' for stdin");
    track->add_option("-o,--output", trk_out, "CSV output, '-' for stdout");
    track->add_option("--rate", trk_rate, "Filter rate [Hz]")->check(CLI::PositiveNumber);
    track->add_option("--stale", trk_stale, "Seconds without a report before a track is retired")
        ->check(CLI::PositiveNumber);
    track->add_option("--earth", trk_earth, "Earth model for prediction")->check(CLI::IsMember({"sphere", "wgs84"}));

    // simulate
    std::string sim_scenario = "boston";
    std::string sim_out = "-";
    std::string sim_filters = "both";
    std::string sim_nmea;
    std::uint64_t sim_seed = seed_default;
    double sim_interval = 0.0;
    auto* simulate = app.add_subcommand("simulate", "Run the UKF and EKF on a simulated scenario");
    simulate->add_option("-s,--scenario", sim_scenario, "Scenario file, or 'boston' / 'lawnmower'");
    simulate->add_option("-o,--output", sim_out, "Per-step CSV, '-' for stdout");
    simulate->add_option("--filters", sim_filters)->check(CLI::IsMember({"ukf", "ekf", "both"}));
    simulate->add_option("--seed", sim_seed, "Random seed");
    simulate->add_option("--ais-interval", sim_interval, "Override the AIS interval [s]")
        ->check(CLI::NonNegativeNumber);
    simulate->add_option("--nmea", sim_nmea, "Also write the simulated reports as AIVDM lines");

    // study
    std::string study_kind;
    std::string study_out = "-";
    std::size_t study_samples = 100000;
    std::uint64_t study_seed = seed_default;
    unsigned study_threads = 0;
    std::size_t study_l_steps = 11;
    std::size_t study_gamma_steps = 13;
    double study_max_l = 100.0e3;
    int study_sections = 10;
    auto* study = app.add_subcommand("study", "Error studies");
    study->add_option("kind", study_kind, "sphere-error | plane-error | wave-table | lawnmower-sweep")
        ->required()
        ->check(CLI::IsMember({"sphere-error", "plane-error", "wave-table", "lawnmower-sweep"}));
    study->add_option("-o,--output", study_out, "CSV output, '-' for stdout");
    study->add_option("-n,--samples", study_samples, "Monte Carlo samples")->check(CLI::PositiveNumber);
    study->add_option("--seed", study_seed, "Random seed");
    study->add_option("-j,--threads", study_threads, "Worker threads, 0 for all processors");
    study->add_option("--l-steps", study_l_steps, "Grid steps in L1 and L2")->check(CLI::Range(2, 1000));
    study->add_option("--gamma-steps", study_gamma_steps, "Grid steps in gamma")->check(CLI::Range(2, 1000));
    study->add_option("--max-l", study_max_l, "Largest planar distance [m]")->check(CLI::PositiveNumber);
    study->add_option("--sections", study_sections, "Lawnmower sections per run")->check(CLI::Range(1, 1000));

    std::vector<std::string> argv_store;
    argv_store.reserve(args.size() + 1);
    argv_store.emplace_back("geotrack");
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        std::unique_ptr<std::ifstream> in_file;
        std::unique_ptr<std::ofstream> out_file;

        if (*decode) {
            DecodeOptions opts;
            if (dec_paper_scaling) opts.scaling = PositionScaling::PaperTable;
            std::istream& is = open_input(dec_in, in, in_file);
            std::ostream& os = open_output(dec_out, out, out_file);
            const DecodeStats s = decode_stream(is, os, opts);
            if (is.bad()) throw InputError("read error");
            print_decode_stats(err, s);
        } else if (*track) {
            TrackerConfig cfg;
            cfg.filter_rate_hz = trk_rate;
            cfg.stale_timeout_s = trk_stale;
            if (trk_earth == "wgs84") cfg.ukf.earth = EarthModel::wgs84();
            std::istream& is = open_input(trk_in, in, in_file);
            std::ostream& os = open_output(trk_out, out, out_file);
            const ReplayStats s = replay_track(is, os, cfg);
            if (is.bad()) throw InputError("read error");
            print_decode_stats(err, s.decode);
            err << "reports=" << s.reports << " created=" << s.created << " updated=" << s.updated
                << " stale=" << s.stale << " no_position=" << s.no_position << " rows=" << s.rows << "\n";
        } else if (*simulate) {
            Scenario sc;
            try {
                sc = resolve_scenario(sim_scenario);
            } catch (const ParseError& e) {
                throw InputError(e.what());
            }
            if (simulate->count("--seed") > 0 || std::getenv(kSeedEnvVar) != nullptr) sc.seed = sim_seed;
            if (sim_interval > 0.0) sc.ais_interval = sim_interval;
            ComparisonOptions opts;
            opts.run_ukf = sim_filters != "ekf";
            opts.run_ekf = sim_filters != "ukf";
            const ComparisonResult r = run_comparison(sc, opts);
            std::ostream& os = open_output(sim_out, out, out_file);
            write_run_csv(os, r);
            if (opts.run_ukf) print_metrics(err, "ukf", r.ukf);
            if (opts.run_ekf) print_metrics(err, "ekf", r.ekf);
            if (!sim_nmea.empty()) {
                std::ofstream nm(sim_nmea);
                if (!nm) throw InputError("cannot write " + sim_nmea);
                for (const auto& l : simulated_nmea(sc, sample_ais(generate_truth(sc), sc))) nm << l << "\n";
            }
        } else if (*study) {
            std::ostream& os = open_output(study_out, out, out_file);
            if (study_kind == "sphere-error") {
                SphereErrorParams p;
                p.samples = study_samples;
                p.seed = study_seed;
                p.threads = study_threads;
                const auto samples = sphere_error_study(p);
                write_sphere_error_csv(os, samples);
                const SphereErrorSummary s = summarize(samples);
                char buf[256];
                std::snprintf(buf, sizeof buf,
                              "samples=%zu max=%.4f%% p75=%.4f%% median=%.4f%% max_error_le_200m=%.3f m\n",
                              s.samples, 100.0 * s.max_normalized, 100.0 * s.p75_normalized,
                              100.0 * s.median_normalized, s.max_error_short_m);
                err << buf;
            } else if (study_kind == "plane-error") {
                PlaneErrorParams p;
                p.l_steps = study_l_steps;
                p.gamma_steps = study_gamma_steps;
                p.max_l = study_max_l;
                write_plane_error_csv(os, plane_error_grid(p));
            } else if (study_kind == "wave-table") {
                write_wave_table_csv(os, wave_table());
            } else {
                std::vector<double> intervals;
                for (int dt = 2; dt <= 68; ++dt) intervals.push_back(dt);
                write_sweep_csv(os, lawnmower_sweep(intervals, study_sections, study_seed, study_threads));
            }
        }
        out.flush();
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const Error& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitOk;
}

}  // namespace geotrack
