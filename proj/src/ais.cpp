#include <cmath>
#include <limits>

#include "geotrack/ais.hpp"
#include "geotrack/errors.hpp"

namespace geotrack {

namespace {

// Bit offsets of the dynamic fields; Class B (type 18) sits 4 bits earlier
// than Class A from SOG onward.
struct DynamicLayout {
    std::size_t sog, lon, lat, cog, heading, second, min_bits;
};
constexpr DynamicLayout kClassA{50, 61, 89, 116, 128, 137, 143};
constexpr DynamicLayout kClassB{46, 57, 85, 112, 124, 133, 139};

constexpr std::int64_t kLonMissingRaw = 181 * 600000;
constexpr std::int64_t kLatMissingRaw = 91 * 600000;
constexpr std::uint64_t kSogMissingRaw = 1023;
constexpr std::uint64_t kCogMissingFrom = 3600;
constexpr std::uint64_t kHeadingMissingRaw = 511;

double position_degrees(std::int64_t raw, PositionScaling scaling) {
    return scaling == PositionScaling::Itu ? static_cast<double>(raw) / 600000.0
                                           : static_cast<double>(raw) * 6e-5;
}

std::string strip_text(std::string s) {
    while (!s.empty() && (s.back() == '@' || s.back() == ' ')) {
        s.pop_back();
    }
    const std::size_t first = s.find_first_not_of(' ');
    return first == std::string::npos ? std::string() : s.substr(first);
}

}  // namespace

Measurement DynamicAisReport::to_measurement() const {
    Measurement m;
    const std::optional<double> fields[4] = {lon, lat, sog, cog};
    for (int i = 0; i < 4; ++i) {
        if (fields[i]) {
            m.z[i] = *fields[i];
        } else {
            m.drop(i);
        }
    }
    return m;
}

int message_type(const BitVector& bits) { return static_cast<int>(bits.uint_at(0, 6)); }

DynamicAisReport decode_dynamic(const BitVector& bits, const DecodeOptions& opts) {
    const int type = message_type(bits);
    const DynamicLayout* layout = nullptr;
    if (type == 1 || type == 2 || type == 3) {
        layout = &kClassA;
    } else if (type == 18) {
        layout = &kClassB;
    } else {
        throw WrongMessageType("not a position report: type " + std::to_string(type));
    }
    if (bits.size() < layout->min_bits) {
        throw TruncatedPayload("position report shorter than " + std::to_string(layout->min_bits) + " bits");
    }

    DynamicAisReport r;
    r.msg_type = type;
    r.mmsi = static_cast<std::uint32_t>(bits.uint_at(8, 30));

    const std::uint64_t sog = bits.uint_at(layout->sog, 10);
    if (sog != kSogMissingRaw) {
        r.sog = kKnotToMps * static_cast<double>(sog) / 10.0;
    }
    const std::int64_t lon = bits.int_at(layout->lon, 28);
    if (lon != kLonMissingRaw) {
        const double deg = position_degrees(lon, opts.scaling);
        if (std::abs(deg) <= 180.0) {
            r.lon = deg;
        }
    }
    const std::int64_t lat = bits.int_at(layout->lat, 27);
    if (lat != kLatMissingRaw) {
        const double deg = position_degrees(lat, opts.scaling);
        if (std::abs(deg) <= 90.0) {
            r.lat = deg;
        }
    }
    const std::uint64_t cog = bits.uint_at(layout->cog, 12);
    if (cog < kCogMissingFrom) {
        r.cog = static_cast<double>(cog) / 10.0;
    }
    const std::uint64_t heading = bits.uint_at(layout->heading, 9);
    if (heading != kHeadingMissingRaw && heading < 360) {
        r.heading = static_cast<double>(heading);
    }
    const std::uint64_t second = bits.uint_at(layout->second, 6);
    if (second < 60) {
        r.timestamp_sec = static_cast<int>(second);
    }
    return r;
}

std::string decode_sixbit_text(const BitVector& bits, std::size_t start, int count) {
    std::string s;
    s.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const auto v = static_cast<int>(bits.uint_at(start + 6 * static_cast<std::size_t>(i), 6));
        s.push_back(static_cast<char>(v < 32 ? v + 64 : v));
    }
    return strip_text(std::move(s));
}

StaticAisReport decode_static(const BitVector& bits) {
    const int type = message_type(bits);
    if (type != 5) {
        throw WrongMessageType("not a static report: type " + std::to_string(type));
    }
    if (bits.size() < 302) {
        throw TruncatedPayload("static report shorter than 302 bits");
    }
    StaticAisReport r;
    r.mmsi = static_cast<std::uint32_t>(bits.uint_at(8, 30));
    r.imo = static_cast<std::uint32_t>(bits.uint_at(40, 30));
    r.callsign = decode_sixbit_text(bits, 70, 7);
    r.name = decode_sixbit_text(bits, 112, 20);
    r.type_code = static_cast<int>(bits.uint_at(232, 8));
    r.to_bow = static_cast<int>(bits.uint_at(240, 9));
    r.to_stern = static_cast<int>(bits.uint_at(249, 9));
    r.to_port = static_cast<int>(bits.uint_at(258, 6));
    r.to_starboard = static_cast<int>(bits.uint_at(264, 6));
    r.fix_type = static_cast<int>(bits.uint_at(270, 4));
    r.draught = static_cast<double>(bits.uint_at(294, 8)) / 10.0;
    return r;
}

AisReport decode_message(const BitVector& bits, const DecodeOptions& opts) {
    const int type = message_type(bits);
    if (type == 5) {
        return decode_static(bits);
    }
    return decode_dynamic(bits, opts);
}

std::uint32_t report_mmsi(const AisReport& r) {
    return std::visit([](const auto& x) { return x.mmsi; }, r);
}

std::optional<DecodedMessage> StreamDecoder::push_line(std::string_view line, double now) {
    ++stats_.lines;
    std::size_t non_space = 0;
    for (char c : line) {
        if (c != ' ' && c != '\t' && c != '\r' && c != '\n') {
            ++non_space;
        }
    }
    if (non_space == 0) {
        ++stats_.blank;
        return std::nullopt;
    }

    const std::size_t dropped_before = assembler_.dropped();
    std::optional<DecodedMessage> out;
    try {
        const NmeaSentence s = parse_sentence(line);
        const double clock = s.tag_time.value_or(now);
        auto complete = assembler_.push(s, clock);
        if (complete) {
            DecodedMessage msg{decode_message(complete->bits, opts_), std::nullopt, s.channel, stats_.lines};
            for (const auto& f : complete->fragments) {
                if (f.tag_time) {
                    msg.tag_time = f.tag_time;
                    break;
                }
            }
            ++stats_.decoded;
            out = std::move(msg);
        }
    } catch (const ChecksumMismatch&) {
        ++stats_.checksum_failures;
    } catch (const MalformedSentence&) {
        ++stats_.malformed;
    } catch (const InvalidCharacter&) {
        ++stats_.malformed;
    } catch (const ConflictingFragments&) {
        ++stats_.conflicting;
    } catch (const IncompleteMessage&) {
        ++stats_.incomplete;
    } catch (const WrongMessageType&) {
        ++stats_.unsupported;
    } catch (const TruncatedPayload&) {
        ++stats_.truncated;
    }
    stats_.incomplete += assembler_.dropped() - dropped_before;
    return out;
}

void StreamDecoder::finish() {
    stats_.incomplete += assembler_.pending();
    assembler_.expire(std::numeric_limits<double>::infinity());
}

}  // namespace geotrack
