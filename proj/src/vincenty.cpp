// Vincenty's nested-series solutions of the direct and inverse geodesic
// problems on an ellipsoid of revolution.

#include <cmath>
#include <numbers>

#include "geotrack/errors.hpp"
#include "geotrack/geodesy.hpp"

namespace geotrack {

namespace {

struct Series {
    double A;
    double B;
};

Series series_coefficients(double cos2_alpha, double a, double b) {
    const double u2 = cos2_alpha * (a * a - b * b) / (b * b);
    const double A = 1.0 + u2 / 16384.0 * (4096.0 + u2 * (-768.0 + u2 * (320.0 - 175.0 * u2)));
    const double B = u2 / 1024.0 * (256.0 + u2 * (-128.0 + u2 * (74.0 - 47.0 * u2)));
    return {A, B};
}

double delta_sigma(double B, double sin_s, double cos_s, double cos_2sm) {
    const double c2 = cos_2sm * cos_2sm;
    return B * sin_s *
           (cos_2sm + B / 4.0 *
                          (cos_s * (-1.0 + 2.0 * c2) -
                           B / 6.0 * cos_2sm * (-3.0 + 4.0 * sin_s * sin_s) * (-3.0 + 4.0 * c2)));
}

void require_ellipsoid(const EarthModel& model) {
    model.validate();
    if (model.mode != EarthModel::Mode::Ellipsoid) {
        throw DomainError("Vincenty solutions need an ellipsoidal earth model");
    }
}

}  // namespace

GeodesicSolution vincenty_direct(GeoPoint p, double bearing_deg, double distance_m,
                                 const EarthModel& model) {
    require_ellipsoid(model);
    if (distance_m < 0.0) {
        throw DomainError("vincenty_direct: distance must be nonnegative");
    }
    if (distance_m == 0.0) {
        return {p, normalize_bearing(bearing_deg), 1};
    }

    const double a = model.semi_major;
    const double f = model.flattening;
    const double b = model.semi_minor();

    const double alpha1 = bearing_deg * kDegToRad;
    const double sin_a1 = std::sin(alpha1);
    const double cos_a1 = std::cos(alpha1);

    // Reduced latitude via its sine/cosine so the poles stay finite.
    const double phi1 = p.lat * kDegToRad;
    const double tan_u1 = (1.0 - f) * std::tan(phi1);
    double cos_u1 = 1.0 / std::sqrt(1.0 + tan_u1 * tan_u1);
    double sin_u1 = tan_u1 * cos_u1;
    if (std::abs(p.lat) >= 90.0) {
        cos_u1 = 0.0;
        sin_u1 = p.lat > 0.0 ? 1.0 : -1.0;
    }

    const double sigma1 = std::atan2(sin_u1, cos_u1 * cos_a1);
    const double sin_alpha = cos_u1 * sin_a1;
    const double cos2_alpha = 1.0 - sin_alpha * sin_alpha;
    const auto [A, B] = series_coefficients(cos2_alpha, a, b);

    const double sigma0 = distance_m / (b * A);
    double sigma = sigma0;
    double sin_s = 0.0;
    double cos_s = 0.0;
    double cos_2sm = 0.0;
    int iterations = 0;
    while (true) {
        ++iterations;
        cos_2sm = std::cos(2.0 * sigma1 + sigma);
        sin_s = std::sin(sigma);
        cos_s = std::cos(sigma);
        const double next = sigma0 + delta_sigma(B, sin_s, cos_s, cos_2sm);
        const double change = std::abs(next - sigma);
        sigma = next;
        if (change < kVincentyTolerance) {
            break;
        }
        if (iterations >= kVincentyMaxIterations) {
            throw NonConvergence("vincenty_direct: no convergence after 200 iterations");
        }
    }
    cos_2sm = std::cos(2.0 * sigma1 + sigma);
    sin_s = std::sin(sigma);
    cos_s = std::cos(sigma);

    const double tmp = sin_u1 * sin_s - cos_u1 * cos_s * cos_a1;
    const double phi2 = std::atan2(sin_u1 * cos_s + cos_u1 * sin_s * cos_a1,
                                   (1.0 - f) * std::sqrt(sin_alpha * sin_alpha + tmp * tmp));
    const double lambda = std::atan2(sin_s * sin_a1, cos_u1 * cos_s - sin_u1 * sin_s * cos_a1);
    const double C = f / 16.0 * cos2_alpha * (4.0 + f * (4.0 - 3.0 * cos2_alpha));
    const double L =
        lambda - (1.0 - C) * f * sin_alpha *
                     (sigma + C * sin_s * (cos_2sm + C * cos_s * (-1.0 + 2.0 * cos_2sm * cos_2sm)));

    double lon1 = p.lon * kDegToRad;
    if (std::abs(p.lat) >= 90.0) {
        // Same pole convention as the spherical step.
        lon1 = p.lat > 0.0 ? (2.0 * bearing_deg - 180.0) * kDegToRad : 0.0;
    }
    const double alpha2 = std::atan2(sin_alpha, -tmp);

    GeodesicSolution out;
    out.destination = GeoPoint{normalize_lon((lon1 + L) * kRadToDeg), phi2 * kRadToDeg};
    out.final_bearing = normalize_bearing(alpha2 * kRadToDeg);
    out.iterations = iterations;
    return out;
}

InverseSolution vincenty_inverse(GeoPoint p1, GeoPoint p2, const EarthModel& model) {
    require_ellipsoid(model);

    const double a = model.semi_major;
    const double f = model.flattening;
    const double b = model.semi_minor();

    const double L = normalize_lon(p2.lon - p1.lon) * kDegToRad;
    const double tan_u1 = (1.0 - f) * std::tan(p1.lat * kDegToRad);
    const double tan_u2 = (1.0 - f) * std::tan(p2.lat * kDegToRad);
    const double cos_u1 = 1.0 / std::sqrt(1.0 + tan_u1 * tan_u1);
    const double sin_u1 = tan_u1 * cos_u1;
    const double cos_u2 = 1.0 / std::sqrt(1.0 + tan_u2 * tan_u2);
    const double sin_u2 = tan_u2 * cos_u2;

    double lambda = L;
    double sin_l = 0.0;
    double cos_l = 0.0;
    double sin_s = 0.0;
    double cos_s = 0.0;
    double sigma = 0.0;
    double sin_alpha = 0.0;
    double cos2_alpha = 0.0;
    double cos_2sm = 0.0;
    int iterations = 0;
    while (true) {
        ++iterations;
        sin_l = std::sin(lambda);
        cos_l = std::cos(lambda);
        const double t1 = cos_u2 * sin_l;
        const double t2 = cos_u1 * sin_u2 - sin_u1 * cos_u2 * cos_l;
        sin_s = std::sqrt(t1 * t1 + t2 * t2);
        if (sin_s == 0.0) {
            // coincident points
            return InverseSolution{0.0, 0.0, 0.0, iterations};
        }
        cos_s = sin_u1 * sin_u2 + cos_u1 * cos_u2 * cos_l;
        sigma = std::atan2(sin_s, cos_s);
        sin_alpha = cos_u1 * cos_u2 * sin_l / sin_s;
        cos2_alpha = 1.0 - sin_alpha * sin_alpha;
        cos_2sm = cos2_alpha != 0.0 ? cos_s - 2.0 * sin_u1 * sin_u2 / cos2_alpha : 0.0;
        const double C = f / 16.0 * cos2_alpha * (4.0 + f * (4.0 - 3.0 * cos2_alpha));
        const double next =
            L + (1.0 - C) * f * sin_alpha *
                    (sigma + C * sin_s * (cos_2sm + C * cos_s * (-1.0 + 2.0 * cos_2sm * cos_2sm)));
        const double change = std::abs(next - lambda);
        lambda = next;
        if (std::abs(lambda) > std::numbers::pi) {
            throw NonConvergence("vincenty_inverse: lambda left [-pi, pi] (nearly antipodal points)");
        }
        if (change < kVincentyTolerance) {
            break;
        }
        if (iterations >= kVincentyMaxIterations) {
            throw NonConvergence("vincenty_inverse: no convergence after 200 iterations");
        }
    }
    // Final trig at the converged lambda.
    sin_l = std::sin(lambda);
    cos_l = std::cos(lambda);
    {
        const double t1 = cos_u2 * sin_l;
        const double t2 = cos_u1 * sin_u2 - sin_u1 * cos_u2 * cos_l;
        sin_s = std::sqrt(t1 * t1 + t2 * t2);
        cos_s = sin_u1 * sin_u2 + cos_u1 * cos_u2 * cos_l;
        sigma = std::atan2(sin_s, cos_s);
        sin_alpha = sin_s != 0.0 ? cos_u1 * cos_u2 * sin_l / sin_s : 0.0;
        cos2_alpha = 1.0 - sin_alpha * sin_alpha;
        cos_2sm = cos2_alpha != 0.0 ? cos_s - 2.0 * sin_u1 * sin_u2 / cos2_alpha : 0.0;
    }

    const auto [A, B] = series_coefficients(cos2_alpha, a, b);
    const double s = b * A * (sigma - delta_sigma(B, sin_s, cos_s, cos_2sm));

    const double alpha1 = std::atan2(cos_u2 * sin_l, cos_u1 * sin_u2 - sin_u1 * cos_u2 * cos_l);
    const double alpha2 = std::atan2(cos_u1 * sin_l, -sin_u1 * cos_u2 + cos_u1 * sin_u2 * cos_l);

    InverseSolution out;
    out.distance = s;
    out.initial_bearing = normalize_bearing(alpha1 * kRadToDeg);
    out.final_bearing = normalize_bearing(alpha2 * kRadToDeg);
    out.iterations = iterations;
    return out;
}

}  // namespace geotrack
