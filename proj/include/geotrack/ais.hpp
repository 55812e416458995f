#pragma once

// NMEA 0183 AIVDM/AIVDO decoding for AIS message types 1, 2, 3, 5 and 18.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <variant>
#include <vector>

#include "geotrack/ukf.hpp"

namespace geotrack {

// ---------------------------------------------------------------- sentences

struct NmeaSentence {
    std::string tag;  ///< talker + sentence type, e.g. "AIVDM"
    int fragment_count = 1;
    int fragment_index = 1;
    std::optional<int> sequence_id;
    std::string channel;
    std::string payload;
    int fill_bits = 0;
    std::uint8_t checksum = 0;

    /// Unix time from a `c:` field in a leading tag block, if any.
    std::optional<double> tag_time;
};

/// XOR of every byte of `body`.
std::uint8_t nmea_checksum(std::string_view body);

/// True iff the XOR of the bytes between the leading '!' or '$' and '*'
/// matches the two hex digits after '*'. Throws MalformedSentence when the
/// delimiters or the hex digits are missing.
bool verify_checksum(std::string_view line);

struct TagBlockSplit {
    std::string_view tag_block;  ///< contents between the backslashes, may be empty
    std::string_view sentence;
};

/// Separates an optional `\...\` tag block from the sentence that follows.
TagBlockSplit split_tag_block(std::string_view line);

/// Parses one line (tag block allowed). Throws MalformedSentence, or
/// ChecksumMismatch when `check_checksum` is set and the checksum is wrong.
NmeaSentence parse_sentence(std::string_view line, bool check_checksum = true);

/// Formats a sentence with a freshly computed checksum (no tag block).
std::string format_sentence(const NmeaSentence& s);

// ---------------------------------------------------------------- payload bits

class BitVector {
public:
    BitVector() = default;

    std::size_t size() const { return bits_.size(); }
    bool operator[](std::size_t i) const { return bits_[i] != 0; }
    bool operator==(const BitVector&) const = default;

    void push_back(bool b) { bits_.push_back(b ? 1 : 0); }
    void append(const BitVector& other);
    void append_uint(std::uint64_t value, int width);
    void truncate(std::size_t n);

    /// Unsigned field [start, start + width). Throws TruncatedPayload.
    std::uint64_t uint_at(std::size_t start, int width) const;

    /// Two's-complement field. Throws TruncatedPayload.
    std::int64_t int_at(std::size_t start, int width) const;

    std::string to_string() const;

private:
    std::vector<std::uint8_t> bits_;
};

/// Value of one armored character. Throws InvalidCharacter outside '0'-'W'
/// and '`'-'w'.
int sixbit_value(char c);

/// Armored character for a 6-bit value.
char sixbit_char(int value);

/// Six bits per character MSB-first, then drops `fill_bits` trailing bits.
BitVector dearmor(std::string_view payload, int fill_bits);

struct ArmoredPayload {
    std::string payload;
    int fill_bits = 0;
};

/// Inverse of dearmor; the last character is zero-padded.
ArmoredPayload armor(const BitVector& bits);

/// Concatenates fragment payload bits in fragment_index order. Throws
/// IncompleteMessage when an index is missing and ConflictingFragments when
/// fragments disagree on count or sequence id or repeat an index.
BitVector assemble_fragments(std::vector<NmeaSentence> fragments);

/// Collects multi-sentence messages keyed by (sequence id, channel), in any
/// fragment order. Partial messages older than `timeout` seconds of the
/// injected clock are dropped when the next sentence arrives. Restarted
/// sequences and expired partials add to dropped().
class FragmentAssembler {
public:
    explicit FragmentAssembler(double timeout_s = 30.0) : timeout_(timeout_s) {}

    struct Complete {
        BitVector bits;
        std::vector<NmeaSentence> fragments;
    };

    /// Returns the assembled message once its last fragment arrives. Throws
    /// ConflictingFragments (dropping the partial) when a fragment repeats an
    /// index or disagrees on the fragment count, InvalidCharacter for a bad
    /// payload.
    std::optional<Complete> push(const NmeaSentence& s, double now);

    /// Drops partials older than the timeout; returns how many were dropped.
    std::size_t expire(double now);

    std::size_t pending() const { return partial_.size(); }
    std::size_t dropped() const { return dropped_; }

private:
    struct Partial {
        double first_seen = 0.0;
        int count = 0;
        std::map<int, NmeaSentence> parts;
    };
    double timeout_;
    std::size_t dropped_ = 0;
    std::map<std::tuple<int, std::string>, Partial> partial_;
};

// ---------------------------------------------------------------- reports

/// How raw 1/10000-minute position fields are turned into degrees.
enum class PositionScaling {
    Itu,         ///< raw / 600000
    PaperTable,  ///< raw * 6e-5, kept for comparison with the printed table
};

struct DecodeOptions {
    PositionScaling scaling = PositionScaling::Itu;
};

inline constexpr double kKnotToMps = 0.51444;

struct DynamicAisReport {
    int msg_type = 0;
    std::uint32_t mmsi = 0;
    std::optional<double> lon;      ///< degrees
    std::optional<double> lat;      ///< degrees
    std::optional<double> sog;      ///< m/s
    std::optional<double> cog;      ///< degrees [0, 360)
    std::optional<double> heading;  ///< degrees
    std::optional<int> timestamp_sec;

    /// Filter measurement with absent fields masked.
    Measurement to_measurement() const;
};

struct StaticAisReport {
    int msg_type = 5;
    std::uint32_t mmsi = 0;
    std::uint32_t imo = 0;
    std::string callsign;
    std::string name;
    int type_code = 0;
    int to_bow = 0;
    int to_stern = 0;
    int to_port = 0;
    int to_starboard = 0;
    int fix_type = 0;
    double draught = 0.0;  ///< meters
};

using AisReport = std::variant<DynamicAisReport, StaticAisReport>;

/// First six bits. Throws TruncatedPayload on an empty payload.
int message_type(const BitVector& bits);

/// Types 1, 2, 3 and 18. Throws WrongMessageType or TruncatedPayload.
DynamicAisReport decode_dynamic(const BitVector& bits, const DecodeOptions& opts = {});

/// Type 5. Throws WrongMessageType or TruncatedPayload.
StaticAisReport decode_static(const BitVector& bits);

/// Dispatches on the message type; other types throw WrongMessageType.
AisReport decode_message(const BitVector& bits, const DecodeOptions& opts = {});

/// `count` six-bit characters starting at `start`, with trailing '@'
/// padding and surrounding whitespace removed.
std::string decode_sixbit_text(const BitVector& bits, std::size_t start, int count);

std::uint32_t report_mmsi(const AisReport& r);

// ---------------------------------------------------------------- streams

struct DecodedMessage {
    AisReport report;
    std::optional<double> tag_time;
    std::string channel;
    std::size_t line_number = 0;  ///< line of the final fragment, 1-based
};

struct DecodeStats {
    std::size_t lines = 0;
    std::size_t blank = 0;
    std::size_t malformed = 0;
    std::size_t checksum_failures = 0;
    std::size_t unsupported = 0;  ///< valid messages of types this decoder skips
    std::size_t incomplete = 0;   ///< fragment sets that never completed
    std::size_t conflicting = 0;
    std::size_t truncated = 0;
    std::size_t decoded = 0;

    std::size_t skipped() const {
        return malformed + checksum_failures + unsupported + incomplete + conflicting + truncated;
    }
};

/// Line-at-a-time decoder that never throws on bad input; failures are
/// counted in stats(). The fragment clock is the tag-block time when present,
/// otherwise the `now` passed in.
class StreamDecoder {
public:
    explicit StreamDecoder(DecodeOptions opts = {}, double fragment_timeout_s = 30.0)
        : opts_(opts), assembler_(fragment_timeout_s) {}

    std::optional<DecodedMessage> push_line(std::string_view line, double now = 0.0);

    /// Counts unfinished fragment sets as incomplete.
    void finish();

    const DecodeStats& stats() const { return stats_; }

private:
    DecodeOptions opts_;
    FragmentAssembler assembler_;
    DecodeStats stats_;
};

}  // namespace geotrack
