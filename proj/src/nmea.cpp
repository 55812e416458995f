#include <algorithm>
#include <charconv>
#include <cstdio>

#include "geotrack/ais.hpp"
#include "geotrack/errors.hpp"

namespace geotrack {

namespace {

std::string_view trim_line(std::string_view s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == '\n' || s.back() == ' ' || s.back() == '\t')) {
        s.remove_suffix(1);
    }
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    return s;
}

int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

int parse_small_int(std::string_view s, int lo, int hi, const char* what) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || v < lo || v > hi) {
        throw MalformedSentence(std::string("bad ") + what + " field");
    }
    return v;
}

std::optional<double> tag_block_time(std::string_view block) {
    const std::size_t star = block.find('*');
    if (star != std::string_view::npos) {
        block = block.substr(0, star);
    }
    for (std::string_view field : split(block, ',')) {
        if (field.size() > 2 && field.substr(0, 2) == "c:") {
            double v = 0.0;
            const auto digits = field.substr(2);
            const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
            if (ec == std::errc() && ptr == digits.data() + digits.size()) {
                return v;
            }
        }
    }
    return std::nullopt;
}

}  // namespace

std::uint8_t nmea_checksum(std::string_view body) {
    std::uint8_t x = 0;
    for (char c : body) {
        x ^= static_cast<std::uint8_t>(c);
    }
    return x;
}

bool verify_checksum(std::string_view line) {
    line = trim_line(line);
    if (line.empty() || (line.front() != '!' && line.front() != '$')) {
        throw MalformedSentence("sentence must start with '!' or '$'");
    }
    const std::size_t star = line.rfind('*');
    if (star == std::string_view::npos || star + 3 > line.size()) {
        throw MalformedSentence("missing checksum");
    }
    const int hi = hex_digit(line[star + 1]);
    const int lo = hex_digit(line[star + 2]);
    if (hi < 0 || lo < 0 || star + 3 != line.size()) {
        throw MalformedSentence("checksum is not two hex digits");
    }
    return nmea_checksum(line.substr(1, star - 1)) == static_cast<std::uint8_t>(hi * 16 + lo);
}

TagBlockSplit split_tag_block(std::string_view line) {
    line = trim_line(line);
    if (line.empty() || line.front() != '\\') {
        return {{}, line};
    }
    const std::size_t close = line.find('\\', 1);
    if (close == std::string_view::npos) {
        throw MalformedSentence("unterminated tag block");
    }
    return {line.substr(1, close - 1), line.substr(close + 1)};
}

NmeaSentence parse_sentence(std::string_view line, bool check_checksum) {
    const TagBlockSplit parts = split_tag_block(line);
    const std::string_view text = parts.sentence;

    const bool ok = verify_checksum(text);
    if (check_checksum && !ok) {
        throw ChecksumMismatch("checksum mismatch");
    }
    const std::size_t star = text.rfind('*');
    const auto fields = split(text.substr(1, star - 1), ',');
    if (fields.size() != 7) {
        throw MalformedSentence("expected 7 comma-separated fields");
    }
    if (fields[0].size() != 5) {
        throw MalformedSentence("bad talker/sentence tag");
    }

    NmeaSentence s;
    s.tag = std::string(fields[0]);
    s.fragment_count = parse_small_int(fields[1], 1, 9, "fragment count");
    s.fragment_index = parse_small_int(fields[2], 1, s.fragment_count, "fragment index");
    if (!fields[3].empty()) {
        s.sequence_id = parse_small_int(fields[3], 0, 9, "sequence id");
    }
    s.channel = std::string(fields[4]);
    s.payload = std::string(fields[5]);
    s.fill_bits = parse_small_int(fields[6], 0, 5, "fill bits");
    s.checksum = static_cast<std::uint8_t>(hex_digit(text[star + 1]) * 16 + hex_digit(text[star + 2]));
    if (!parts.tag_block.empty()) {
        s.tag_time = tag_block_time(parts.tag_block);
    }
    return s;
}

std::string format_sentence(const NmeaSentence& s) {
    std::string body = s.tag + ',' + std::to_string(s.fragment_count) + ',' +
                       std::to_string(s.fragment_index) + ',' +
                       (s.sequence_id ? std::to_string(*s.sequence_id) : std::string()) + ',' +
                       s.channel + ',' + s.payload + ',' + std::to_string(s.fill_bits);
    char cs[4];
    std::snprintf(cs, sizeof cs, "%02X", nmea_checksum(body));
    return "!" + body + "*" + cs;
}

void BitVector::append(const BitVector& other) {
    bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
}

void BitVector::append_uint(std::uint64_t value, int width) {
    for (int i = width - 1; i >= 0; --i) {
        bits_.push_back(static_cast<std::uint8_t>((value >> i) & 1U));
    }
}

void BitVector::truncate(std::size_t n) {
    if (n < bits_.size()) {
        bits_.resize(n);
    }
}

std::uint64_t BitVector::uint_at(std::size_t start, int width) const {
    if (width < 0 || width > 64 || start + static_cast<std::size_t>(width) > bits_.size()) {
        throw TruncatedPayload("payload too short for field at bit " + std::to_string(start));
    }
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) {
        v = (v << 1) | bits_[start + static_cast<std::size_t>(i)];
    }
    return v;
}

std::int64_t BitVector::int_at(std::size_t start, int width) const {
    const std::uint64_t u = uint_at(start, width);
    if (width > 0 && width < 64 && ((u >> (width - 1)) & 1U)) {
        return static_cast<std::int64_t>(u) - (std::int64_t{1} << width);
    }
    return static_cast<std::int64_t>(u);
}

std::string BitVector::to_string() const {
    std::string s;
    s.reserve(bits_.size());
    for (auto b : bits_) {
        s.push_back(b ? '1' : '0');
    }
    return s;
}

int sixbit_value(char c) {
    const int v = static_cast<unsigned char>(c) - 48;
    if (v < 0 || v > 71 || (v > 39 && v < 48)) {
        throw InvalidCharacter(std::string("invalid payload character '") + c + "'");
    }
    return v > 40 ? v - 8 : v;
}

char sixbit_char(int value) {
    value &= 0x3F;
    return static_cast<char>(value < 40 ? value + 48 : value + 56);
}

BitVector dearmor(std::string_view payload, int fill_bits) {
    if (fill_bits < 0 || fill_bits > 5) {
        throw MalformedSentence("fill bits outside 0..5");
    }
    BitVector bits;
    for (char c : payload) {
        bits.append_uint(static_cast<std::uint64_t>(sixbit_value(c)), 6);
    }
    bits.truncate(bits.size() >= static_cast<std::size_t>(fill_bits) ? bits.size() - static_cast<std::size_t>(fill_bits) : 0);
    return bits;
}

ArmoredPayload armor(const BitVector& bits) {
    ArmoredPayload out;
    out.fill_bits = static_cast<int>((6 - bits.size() % 6) % 6);
    BitVector padded = bits;
    for (int i = 0; i < out.fill_bits; ++i) {
        padded.push_back(false);
    }
    for (std::size_t i = 0; i < padded.size(); i += 6) {
        out.payload.push_back(sixbit_char(static_cast<int>(padded.uint_at(i, 6))));
    }
    return out;
}

BitVector assemble_fragments(std::vector<NmeaSentence> fragments) {
    if (fragments.empty()) {
        throw IncompleteMessage("no fragments");
    }
    const int count = fragments.front().fragment_count;
    const auto seq = fragments.front().sequence_id;
    for (const auto& f : fragments) {
        if (f.fragment_count != count || f.sequence_id != seq) {
            throw ConflictingFragments("fragments disagree on count or sequence id");
        }
    }
    std::sort(fragments.begin(), fragments.end(),
              [](const NmeaSentence& a, const NmeaSentence& b) { return a.fragment_index < b.fragment_index; });
    for (std::size_t i = 1; i < fragments.size(); ++i) {
        if (fragments[i].fragment_index == fragments[i - 1].fragment_index) {
            throw ConflictingFragments("repeated fragment index");
        }
    }
    if (static_cast<int>(fragments.size()) != count) {
        throw IncompleteMessage("missing fragments");
    }
    BitVector bits;
    for (const auto& f : fragments) {
        bits.append(dearmor(f.payload, f.fill_bits));
    }
    return bits;
}

std::size_t FragmentAssembler::expire(double now) {
    std::size_t n = 0;
    for (auto it = partial_.begin(); it != partial_.end();) {
        if (now - it->second.first_seen > timeout_) {
            it = partial_.erase(it);
            ++n;
        } else {
            ++it;
        }
    }
    dropped_ += n;
    return n;
}

std::optional<FragmentAssembler::Complete> FragmentAssembler::push(const NmeaSentence& s, double now) {
    expire(now);
    if (s.fragment_count == 1) {
        return Complete{dearmor(s.payload, s.fill_bits), {s}};
    }
    const auto key = std::make_tuple(s.sequence_id.value_or(-1), s.channel);
    auto it = partial_.find(key);

    if (it != partial_.end() && s.fragment_index == 1 && it->second.parts.count(1) != 0) {
        // the talker restarted this sequence id
        ++dropped_;
        partial_.erase(it);
        it = partial_.end();
    }
    if (it == partial_.end()) {
        Partial p;
        p.first_seen = now;
        p.count = s.fragment_count;
        it = partial_.emplace(key, std::move(p)).first;
    }
    Partial& p = it->second;
    if (p.count != s.fragment_count || p.parts.count(s.fragment_index) != 0) {
        partial_.erase(it);
        throw ConflictingFragments("fragment clashes with pending message");
    }
    p.parts.emplace(s.fragment_index, s);
    if (static_cast<int>(p.parts.size()) < p.count) {
        return std::nullopt;
    }
    std::vector<NmeaSentence> frags;
    for (auto& [i, f] : p.parts) {
        frags.push_back(std::move(f));
    }
    partial_.erase(it);
    BitVector bits = assemble_fragments(frags);
    return Complete{std::move(bits), std::move(frags)};
}

}  // namespace geotrack
