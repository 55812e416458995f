#pragma once

// Geometric kernels on the sphere and on the ellipsoid of revolution.
//
// Angles at the API boundary are in degrees, distances in meters. Longitudes
// are normalized to [-180, 180) and bearings to [0, 360) on output.

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <vector>

namespace geotrack {

inline constexpr double kDegToRad = std::numbers::pi / 180.0;
inline constexpr double kRadToDeg = 180.0 / std::numbers::pi;

/// Mean Earth radius used by the spherical process model [m].
inline constexpr double kMeanEarthRadius = 6.371e6;
inline constexpr double kWgs84SemiMajor = 6378137.0;
inline constexpr double kWgs84Flattening = 1.0 / 298.257223563;

/// Wraps any longitude into [-180, 180).
double normalize_lon(double lon_deg);

/// Wraps any bearing into [0, 360).
double normalize_bearing(double bearing_deg);

/// Positive remainder of x / m, in [0, m).
double positive_mod(double x, double m);

struct GeoPoint {
    double lon = 0.0;  ///< degrees East
    double lat = 0.0;  ///< degrees North

    /// Builds a point with validated latitude and normalized longitude.
    /// Throws DomainError when |lat| > 90 or either value is not finite.
    static GeoPoint make(double lon_deg, double lat_deg);
};

struct EarthModel {
    enum class Mode { Sphere, Ellipsoid };

    Mode mode = Mode::Sphere;
    double sphere_radius = kMeanEarthRadius;
    double semi_major = kWgs84SemiMajor;
    double flattening = kWgs84Flattening;

    static EarthModel sphere(double radius = kMeanEarthRadius);
    static EarthModel wgs84();

    double semi_minor() const { return semi_major * (1.0 - flattening); }
    double eccentricity_squared() const { return flattening * (2.0 - flattening); }

    /// Throws DomainError unless R > 0, a > 0 and 0 <= f < 1.
    void validate() const;
};

struct GeodesicSolution {
    GeoPoint destination;
    double final_bearing = 0.0;  ///< forward azimuth at the destination, [0, 360)
    int iterations = 0;
};

struct InverseSolution {
    double distance = 0.0;         ///< meters
    double initial_bearing = 0.0;  ///< [0, 360)
    double final_bearing = 0.0;    ///< [0, 360)
    int iterations = 0;
};

/// Great-circle step on a sphere of radius `radius`: the latitude comes from
/// the spherical law of cosines, the longitude increment from the atan2 form.
///
/// At a pole the departure bearing is read as the longitude of the outbound
/// meridian.
GeoPoint propagate_sphere(GeoPoint p, double bearing_deg, double distance_m, double radius_m);

/// Same step as propagate_sphere, also reporting the arrival azimuth.
GeodesicSolution propagate_sphere_full(GeoPoint p, double bearing_deg, double distance_m,
                                       double radius_m);

inline constexpr double kVincentyTolerance = 1e-12;
inline constexpr int kVincentyMaxIterations = 200;

/// Vincenty's direct problem on the ellipsoid. Throws NonConvergence after
/// kVincentyMaxIterations.
GeodesicSolution vincenty_direct(GeoPoint p, double bearing_deg, double distance_m,
                                 const EarthModel& model);

/// Vincenty's inverse problem. Throws NonConvergence for nearly antipodal pairs.
InverseSolution vincenty_inverse(GeoPoint p1, GeoPoint p2, const EarthModel& model);

/// Great-circle distance on a sphere (haversine form of the law of cosines).
double spherical_distance(GeoPoint p1, GeoPoint p2, double radius_m);

/// Ellipsoidal distance with a spherical fallback when Vincenty does not converge.
double geodesic_distance(GeoPoint p1, GeoPoint p2, const EarthModel& model);

/// Points distributed uniformly by area on the sphere, deterministic for a seed.
std::vector<GeoPoint> sample_uniform_sphere(std::size_t n, std::uint64_t seed);

struct SeparationError {
    double delta_L = 0.0;  ///< projected (planar) separation [m]
    double delta_s = 0.0;  ///< true (arc) separation [m]
    double epsilon = 0.0;  ///< delta_s - delta_L [m]
};

/// Range error from projecting two points at planar distances L1, L2 from a
/// tangent-plane origin, separated by in-plane angle gamma [rad].
/// Throws DomainError unless 0 <= L1, L2 < R and gamma in [0, pi].
SeparationError tangent_plane_separation_error(double L1, double L2, double gamma, double R);

/// Collinear special case: both points on one great circle through the
/// origin at arc distances s1, s2.
double great_circle_separation_error(double s1, double s2, double R);

}  // namespace geotrack
