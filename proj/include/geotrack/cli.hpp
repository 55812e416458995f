#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "geotrack/ais.hpp"
#include "geotrack/tracker.hpp"

namespace geotrack {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;

/// Environment variable that overrides the default seed of every subcommand.
inline constexpr const char* kSeedEnvVar = "GEOTRACK_SEED";

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

/// Decodes a stream of NMEA lines into CSV, one row per report.
DecodeStats decode_stream(std::istream& in, std::ostream& out, const DecodeOptions& opts = {});

struct ReplayStats {
    DecodeStats decode;
    std::size_t reports = 0;
    std::size_t created = 0;
    std::size_t updated = 0;
    std::size_t stale = 0;
    std::size_t no_position = 0;
    std::size_t rows = 0;
};

/// Decodes, feeds dynamic reports to a TrackTable and ticks at the filter
/// rate. Report time is the tag-block time when present, otherwise a
/// synthetic clock advancing each vessel by its nominal reporting interval.
ReplayStats replay_track(std::istream& in, std::ostream& out, const TrackerConfig& config,
                         const DecodeOptions& opts = {});

}  // namespace geotrack
