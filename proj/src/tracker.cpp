#include "geotrack/tracker.hpp"

#include <cstdio>

#include "geotrack/errors.hpp"

namespace geotrack {

TrackTable::TrackTable(TrackerConfig config) : config_(std::move(config)) {
    if (!(config_.filter_rate_hz > 0.0) || !(config_.stale_timeout_s > 0.0) ||
        !(config_.reorder_tolerance_s >= 0.0)) {
        throw DomainError("tracker: rate and timeout must be positive");
    }
}

const Track* TrackTable::find(std::uint32_t mmsi) const {
    const auto it = tracks_.find(mmsi);
    return it == tracks_.end() ? nullptr : &it->second;
}

TrackEvent TrackTable::ingest(const DynamicAisReport& report, double t) {
    TrackEvent ev;
    ev.mmsi = report.mmsi;
    ev.measurement = report.to_measurement();

    auto it = tracks_.find(report.mmsi);
    if (it == tracks_.end()) {
        if (!report.lon || !report.lat) {
            ev.kind = TrackEventKind::NoPosition;
            return ev;
        }
        auto filter = GeodeticUkf::from_measurement(config_.ukf, ev.measurement, t, config_.initial_cov);
        tracks_.emplace(report.mmsi, Track{std::move(filter), t, t});
        ev.kind = TrackEventKind::Created;
        return ev;
    }

    Track& track = it->second;
    const double track_t = track.filter.belief().timestamp;
    if (t < track_t - config_.reorder_tolerance_s) {
        ++stale_dropped_;
        ev.kind = TrackEventKind::DroppedStale;
        return ev;
    }
    // slightly late reports are applied at the track's current time
    if (t > track_t) {
        track.filter.predict_to(t, 1.0 / config_.filter_rate_hz);
    }
    const UpdateResult r = track.filter.update(ev.measurement);
    track.last_update = std::max(track.last_update, t);
    track.last_seen = std::max(track.last_seen, t);
    ev.kind = TrackEventKind::Updated;
    ev.innovation = r.innovation;
    ev.innovation_cov = r.innovation_cov;
    return ev;
}

std::vector<std::pair<std::uint32_t, GaussianBelief>> TrackTable::tick(double t) {
    if (t < last_tick_) {
        throw DomainError("tracker: tick time went backwards");
    }
    last_tick_ = t;
    std::vector<std::pair<std::uint32_t, GaussianBelief>> out;
    for (auto it = tracks_.begin(); it != tracks_.end();) {
        Track& track = it->second;
        if (t - track.last_seen > config_.stale_timeout_s) {
            it = tracks_.erase(it);
            ++retired_;
            continue;
        }
        track.filter.predict_to(t, 1.0 / config_.filter_rate_hz);
        out.emplace_back(it->first, track.filter.belief());
        ++it;
    }
    return out;
}

void write_track_csv_header(std::ostream& os) { os << "t,mmsi,lon_deg,lat_deg,sog_mps,cog_deg,p_trace\n"; }

void write_track_csv_row(std::ostream& os, double t, std::uint32_t mmsi, const GaussianBelief& b) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%.3f,%u,%.8f,%.8f,%.4f,%.3f,%.6e\n", t, mmsi, b.mean.lon, b.mean.lat,
                  b.mean.sog, b.mean.cog, b.cov.trace());
    os << buf;
}

}  // namespace geotrack
