#pragma once

// Per-MMSI track table: one geodetic UKF per vessel, fixed-rate prediction
// between asynchronous AIS reports.

#include <cstdint>
#include <limits>
#include <map>
#include <ostream>
#include <utility>
#include <vector>

#include "geotrack/ais.hpp"
#include "geotrack/ukf.hpp"

namespace geotrack {

struct TrackerConfig {
    UkfConfig ukf;
    double filter_rate_hz = 1.0;
    double stale_timeout_s = 180.0;
    double reorder_tolerance_s = 1.0;
    Matrix4 initial_cov = default_initial_covariance();
};

enum class TrackEventKind {
    Created,
    Updated,
    DroppedStale,   ///< report older than the track by more than the tolerance
    NoPosition,     ///< first report for an MMSI lacks lon or lat; no track made
};

struct TrackEvent {
    TrackEventKind kind = TrackEventKind::Created;
    std::uint32_t mmsi = 0;
    Vector4 innovation = Vector4::Zero();
    Matrix4 innovation_cov = Matrix4::Zero();
    Measurement measurement;
};

struct Track {
    GeodeticUkf filter;
    double last_update = 0.0;
    double last_seen = 0.0;
};

class TrackTable {
public:
    explicit TrackTable(TrackerConfig config = {});

    /// Creates the track on first sighting, otherwise predicts to t and updates.
    TrackEvent ingest(const DynamicAisReport& report, double t);

    /// Predicts every live track to t and retires stale ones. Returns the
    /// surviving beliefs in MMSI order.
    std::vector<std::pair<std::uint32_t, GaussianBelief>> tick(double t);

    std::size_t size() const { return tracks_.size(); }
    const Track* find(std::uint32_t mmsi) const;
    std::size_t stale_dropped() const { return stale_dropped_; }
    std::size_t retired() const { return retired_; }
    const TrackerConfig& config() const { return config_; }

private:
    TrackerConfig config_;
    std::map<std::uint32_t, Track> tracks_;
    double last_tick_ = -std::numeric_limits<double>::infinity();
    std::size_t stale_dropped_ = 0;
    std::size_t retired_ = 0;
};

/// Header row of the estimate stream.
void write_track_csv_header(std::ostream& os);

/// One `t,mmsi,lon_deg,lat_deg,sog_mps,cog_deg,p_trace` row.
void write_track_csv_row(std::ostream& os, double t, std::uint32_t mmsi, const GaussianBelief& b);

}  // namespace geotrack
