#include "geotrack/geodesy.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "geotrack/errors.hpp"

namespace geotrack {

double positive_mod(double x, double m) {
    double r = std::fmod(x, m);
    if (r < 0.0) {
        r += m;
    }
    // fmod of a tiny negative value can round up to exactly m
    if (r >= m) {
        r = 0.0;
    }
    return r;
}

double normalize_lon(double lon_deg) { return positive_mod(lon_deg + 180.0, 360.0) - 180.0; }

double normalize_bearing(double bearing_deg) { return positive_mod(bearing_deg, 360.0); }

GeoPoint GeoPoint::make(double lon_deg, double lat_deg) {
    if (!std::isfinite(lon_deg) || !std::isfinite(lat_deg)) {
        throw DomainError("GeoPoint: non-finite coordinate");
    }
    if (lat_deg < -90.0 || lat_deg > 90.0) {
        throw DomainError("GeoPoint: latitude " + std::to_string(lat_deg) + " outside [-90, 90]");
    }
    return GeoPoint{normalize_lon(lon_deg), lat_deg};
}

EarthModel EarthModel::sphere(double radius) {
    EarthModel m;
    m.mode = Mode::Sphere;
    m.sphere_radius = radius;
    return m;
}

EarthModel EarthModel::wgs84() {
    EarthModel m;
    m.mode = Mode::Ellipsoid;
    return m;
}

void EarthModel::validate() const {
    if (!(sphere_radius > 0.0)) {
        throw DomainError("EarthModel: sphere radius must be positive");
    }
    if (!(semi_major > 0.0)) {
        throw DomainError("EarthModel: semi-major axis must be positive");
    }
    if (!(flattening >= 0.0 && flattening < 1.0)) {
        throw DomainError("EarthModel: flattening must lie in [0, 1)");
    }
}

GeodesicSolution propagate_sphere_full(GeoPoint p, double bearing_deg, double distance_m,
                                       double radius_m) {
    if (distance_m == 0.0) {
        return {p, normalize_bearing(bearing_deg), 1};
    }

    const double alpha = bearing_deg * kDegToRad;
    const double delta = distance_m / radius_m;

    double lon1 = p.lon;
    double lat1 = p.lat;
    double sin_lat1 = std::sin(p.lat * kDegToRad);
    double cos_lat1 = std::cos(p.lat * kDegToRad);
    if (p.lat >= 90.0) {
        // Outbound meridian at longitude == bearing.
        sin_lat1 = 1.0;
        cos_lat1 = 0.0;
        lat1 = 90.0;
        lon1 = 2.0 * bearing_deg - 180.0;
    } else if (p.lat <= -90.0) {
        sin_lat1 = -1.0;
        cos_lat1 = 0.0;
        lat1 = -90.0;
        lon1 = 0.0;
    }

    const double sin_d = std::sin(delta);
    const double cos_d = std::cos(delta);
    const double vers_d = 2.0 * std::sin(0.5 * delta) * std::sin(0.5 * delta);  // 1 - cos(delta)
    const double sin_a = std::sin(alpha);
    const double cos_a = std::cos(alpha);

    // Increments rather than absolute values, so that short repeated steps do
    // not pick up a rounding bias from asin and the degree conversions.
    // (dc, ds) is the chord from (cos lat1, sin lat1) to (cos lat2, sin lat2).
    const double ds = cos_lat1 * sin_d * cos_a - sin_lat1 * vers_d;
    const double x = cos_lat1 * cos_d - sin_lat1 * sin_d * cos_a;  // cos(lat2) cos(dlon)
    const double y = sin_d * sin_a;                                 // cos(lat2) sin(dlon)
    const double cos_lat2 = std::hypot(x, y);
    const double dx = -cos_lat1 * vers_d - sin_lat1 * sin_d * cos_a;  // x - cos(lat1)
    const double dc = (dx * (x + cos_lat1) + y * y) / (cos_lat2 + cos_lat1);
    const double dlat = std::atan2(ds * cos_lat1 - dc * sin_lat1, 1.0 - 0.5 * (ds * ds + dc * dc));
    const double dlon = std::atan2(y, x);

    // Arrival azimuth: Clairaut for the East component, meridional component
    // from the cosine rule.
    const double final_bearing =
        std::atan2(sin_a * cos_lat1, cos_lat1 * cos_d * cos_a - sin_lat1 * sin_d);

    GeodesicSolution out;
    out.destination =
        GeoPoint{normalize_lon(lon1 + dlon * kRadToDeg), std::clamp(lat1 + dlat * kRadToDeg, -90.0, 90.0)};
    out.final_bearing = normalize_bearing(final_bearing * kRadToDeg);
    out.iterations = 1;
    return out;
}

GeoPoint propagate_sphere(GeoPoint p, double bearing_deg, double distance_m, double radius_m) {
    return propagate_sphere_full(p, bearing_deg, distance_m, radius_m).destination;
}

double spherical_distance(GeoPoint p1, GeoPoint p2, double radius_m) {
    const double lat1 = p1.lat * kDegToRad;
    const double lat2 = p2.lat * kDegToRad;
    const double dlat = lat2 - lat1;
    const double dlon = (p2.lon - p1.lon) * kDegToRad;
    const double s_lat = std::sin(dlat / 2.0);
    const double s_lon = std::sin(dlon / 2.0);
    const double h = std::clamp(s_lat * s_lat + std::cos(lat1) * std::cos(lat2) * s_lon * s_lon,
                                0.0, 1.0);
    return 2.0 * radius_m * std::asin(std::sqrt(h));
}

double geodesic_distance(GeoPoint p1, GeoPoint p2, const EarthModel& model) {
    if (model.mode == EarthModel::Mode::Sphere) {
        return spherical_distance(p1, p2, model.sphere_radius);
    }
    try {
        return vincenty_inverse(p1, p2, model).distance;
    } catch (const NonConvergence&) {
        const double mean_radius = (2.0 * model.semi_major + model.semi_minor()) / 3.0;
        return spherical_distance(p1, p2, mean_radius);
    }
}

std::vector<GeoPoint> sample_uniform_sphere(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    // 53-bit mantissa draw, portable across standard libraries
    auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

    std::vector<GeoPoint> points;
    points.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = uniform();
        const double v = uniform();
        const double lon = kRadToDeg * (2.0 * std::numbers::pi * u);
        const double lat = kRadToDeg * (std::acos(2.0 * v - 1.0) - std::numbers::pi / 2.0);
        points.push_back(GeoPoint{normalize_lon(lon), std::clamp(lat, -90.0, 90.0)});
    }
    return points;
}

SeparationError tangent_plane_separation_error(double L1, double L2, double gamma, double R) {
    if (!(R > 0.0)) {
        throw DomainError("separation error: radius must be positive");
    }
    if (!(L1 >= 0.0 && L1 < R && L2 >= 0.0 && L2 < R)) {
        throw DomainError("separation error: projected distances must satisfy 0 <= L < R");
    }
    if (!(gamma >= 0.0 && gamma <= std::numbers::pi)) {
        throw DomainError("separation error: gamma must lie in [0, pi]");
    }

    SeparationError out;
    const double half_sin = std::sin(gamma / 2.0);
    const double dl2 = (L1 - L2) * (L1 - L2) + 4.0 * L1 * L2 * half_sin * half_sin;
    out.delta_L = std::sqrt(dl2);

    // Arc length between the two sphere points whose orthographic projections
    // are the planar points. Evaluated through the 3-D chord, which equals
    // R*acos[(sqrt((R^2-L1^2)(R^2-L2^2)) + L1 L2 cos(gamma)) / R^2] but keeps
    // full precision for nearly coincident points.
    const double z1 = std::sqrt((R - L1) * (R + L1));
    const double z2 = std::sqrt((R - L2) * (R + L2));
    const double dz = (L2 - L1) * (L2 + L1) / (z1 + z2);
    const double chord = std::sqrt(dl2 + dz * dz);
    out.delta_s = 2.0 * R * std::asin(std::min(1.0, chord / (2.0 * R)));
    out.epsilon = out.delta_s - out.delta_L;
    return out;
}

double great_circle_separation_error(double s1, double s2, double R) {
    const double ds = std::abs(s2 - s1);
    const double dl = 2.0 * R * std::abs(std::sin((s2 - s1) / (2.0 * R)) * std::cos((s1 + s2) / (2.0 * R)));
    return ds - dl;
}

}  // namespace geotrack
