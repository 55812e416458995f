#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "geotrack/errors.hpp"
#include "geotrack/sim.hpp"

namespace geotrack {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> words(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        std::size_t j = i;
        while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

template <typename T>
T parse_number(std::string_view s, int line) {
    T v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
        throw ParseError("line " + std::to_string(line) + ": bad number '" + std::string(s) + "'");
    }
    return v;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

double Scenario::duration() const {
    double d = 0.0;
    for (const auto& seg : segments) d += seg.duration;
    return d;
}

void Scenario::validate() const {
    if (segments.empty()) throw DomainError("scenario: no segments");
    for (const auto& seg : segments) {
        if (!(seg.duration > 0.0)) throw DomainError("scenario: segment duration must be positive");
        if (!(seg.speed >= 0.0)) throw DomainError("scenario: segment speed must be nonnegative");
        if (!std::isfinite(seg.turn_rate)) throw DomainError("scenario: turn rate must be finite");
    }
    if (!(truth_rate_hz > 0.0) || !(filter_rate_hz > 0.0)) throw DomainError("scenario: rates must be positive");
    if (!(ais_interval >= 1.0 / truth_rate_hz - 1e-12)) {
        throw DomainError("scenario: AIS interval shorter than the truth step");
    }
    if (!(sog_jitter >= 0.0) || !(cog_jitter >= 0.0)) throw DomainError("scenario: jitter must be nonnegative");
    for (int i = 0; i < 4; ++i) {
        if (!(measurement_std[i] >= 0.0)) throw DomainError("scenario: measurement std must be nonnegative");
    }
    GeoPoint::make(start.lon, start.lat);
}

Scenario parse_scenario(std::string_view text) {
    Scenario s;
    s.segments.clear();
    std::vector<TrajectorySegment> table;
    int repeat = 1;
    bool in_segments = false;
    int line_no = 0;

    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line == "[segments]") {
            in_segments = true;
            continue;
        }
        if (in_segments) {
            const auto w = words(line);
            TrajectorySegment seg;
            if (w[0] == "straight" && w.size() == 3) {
                seg.kind = TrajectorySegment::Kind::Straight;
            } else if (w[0] == "turn" && w.size() == 4) {
                seg.kind = TrajectorySegment::Kind::Turn;
                seg.turn_rate = parse_number<double>(w[3], line_no);
            } else {
                throw ParseError("line " + std::to_string(line_no) + ": expected 'straight <dur> <speed>' or "
                                 "'turn <dur> <speed> <rate>'");
            }
            seg.duration = parse_number<double>(w[1], line_no);
            seg.speed = parse_number<double>(w[2], line_no);
            table.push_back(seg);
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError("line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key == "name") {
            s.name = std::string(value);
        } else if (key == "start_lon") {
            s.start.lon = parse_number<double>(value, line_no);
        } else if (key == "start_lat") {
            s.start.lat = parse_number<double>(value, line_no);
        } else if (key == "initial_cog") {
            s.initial_cog = parse_number<double>(value, line_no);
        } else if (key == "truth_rate_hz") {
            s.truth_rate_hz = parse_number<double>(value, line_no);
        } else if (key == "filter_rate_hz") {
            s.filter_rate_hz = parse_number<double>(value, line_no);
        } else if (key == "ais_interval") {
            s.ais_interval = parse_number<double>(value, line_no);
        } else if (key == "sog_jitter") {
            s.sog_jitter = parse_number<double>(value, line_no);
        } else if (key == "cog_jitter") {
            s.cog_jitter = parse_number<double>(value, line_no);
        } else if (key == "measurement_std") {
            const auto w = words(value);
            if (w.size() != 4) throw ParseError("line " + std::to_string(line_no) + ": measurement_std needs 4 values");
            for (int i = 0; i < 4; ++i) s.measurement_std[i] = parse_number<double>(w[static_cast<std::size_t>(i)], line_no);
        } else if (key == "seed") {
            s.seed = parse_number<std::uint64_t>(value, line_no);
        } else if (key == "mmsi") {
            s.mmsi = parse_number<std::uint32_t>(value, line_no);
        } else if (key == "repeat") {
            repeat = parse_number<int>(value, line_no);
            if (repeat < 1) throw ParseError("line " + std::to_string(line_no) + ": repeat must be >= 1");
        } else {
            throw ParseError("line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
        }
    }
    for (int r = 0; r < repeat; ++r) {
        s.segments.insert(s.segments.end(), table.begin(), table.end());
    }
    try {
        s.validate();
    } catch (const DomainError& e) {
        throw ParseError(e.what());
    }
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open scenario file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

std::string format_scenario(const Scenario& s) {
    std::ostringstream os;
    os << "name = " << s.name << "\n"
       << "start_lon = " << fmt(s.start.lon) << "\n"
       << "start_lat = " << fmt(s.start.lat) << "\n"
       << "initial_cog = " << fmt(s.initial_cog) << "\n"
       << "truth_rate_hz = " << fmt(s.truth_rate_hz) << "\n"
       << "filter_rate_hz = " << fmt(s.filter_rate_hz) << "\n"
       << "ais_interval = " << fmt(s.ais_interval) << "\n"
       << "sog_jitter = " << fmt(s.sog_jitter) << "\n"
       << "cog_jitter = " << fmt(s.cog_jitter) << "\n"
       << "measurement_std = " << fmt(s.measurement_std[0]) << " " << fmt(s.measurement_std[1]) << " "
       << fmt(s.measurement_std[2]) << " " << fmt(s.measurement_std[3]) << "\n"
       << "seed = " << s.seed << "\n"
       << "mmsi = " << s.mmsi << "\n"
       << "[segments]\n";
    for (const auto& seg : s.segments) {
        if (seg.kind == TrajectorySegment::Kind::Straight) {
            os << "straight " << fmt(seg.duration) << " " << fmt(seg.speed) << "\n";
        } else {
            os << "turn " << fmt(seg.duration) << " " << fmt(seg.speed) << " " << fmt(seg.turn_rate) << "\n";
        }
    }
    return os.str();
}

Scenario boston_departure_scenario() {
    Scenario s;
    s.name = "boston_departure";
    s.start = {-71.0237, 42.3469};
    s.initial_cog = 95.0;
    s.ais_interval = 6.0;
    s.seed = 1;
    using K = TrajectorySegment::Kind;
    s.segments = {
        {K::Straight, 240.0, 7.0, 0.0}, {K::Turn, 30.0, 7.0, 1.5},    {K::Straight, 300.0, 7.0, 0.0},
        {K::Turn, 40.0, 7.0, -2.0},     {K::Straight, 360.0, 7.0, 0.0}, {K::Turn, 25.0, 7.0, 1.6},
        {K::Straight, 420.0, 7.0, 0.0}, {K::Turn, 30.0, 7.0, -1.0},   {K::Straight, 300.0, 7.0, 0.0},
    };
    return s;
}

Scenario lawnmower_scenario(double ais_interval, int sections, double leg_m, double radius_m, double speed) {
    Scenario s;
    s.name = "lawnmower";
    s.start = {-71.0237, 42.3469};
    s.initial_cog = 0.0;
    s.truth_rate_hz = 10.0;
    s.ais_interval = ais_interval;
    s.seed = 1;
    const double rate = speed / radius_m * kRadToDeg;
    const double turn_time = std::numbers::pi * radius_m / speed;
    for (int i = 0; i < sections; ++i) {
        s.segments.push_back({TrajectorySegment::Kind::Straight, leg_m / speed, speed, 0.0});
        s.segments.push_back({TrajectorySegment::Kind::Turn, turn_time, speed, i % 2 == 0 ? rate : -rate});
    }
    return s;
}

}  // namespace geotrack
