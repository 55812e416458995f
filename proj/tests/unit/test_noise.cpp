#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "geotrack/errors.hpp"
#include "geotrack/noise.hpp"

using namespace geotrack;

TEST_CASE("default measurement noise: diagonal variances, zero off-diagonals") {
    const Matrix4& R = default_measurement_noise().matrix();
    CHECK(R(0, 0) == doctest::Approx(3.61e-10).epsilon(1e-12));
    CHECK(R(1, 1) == doctest::Approx(2.1025e-10).epsilon(1e-12));
    CHECK(R(2, 2) == doctest::Approx(2.5e-3).epsilon(1e-12));
    CHECK(R(3, 3) == doctest::Approx(0.04).epsilon(1e-12));
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            if (i != j) CHECK(R(i, j) == 0.0);
        }
    }
    CHECK(default_measurement_noise().std_devs()[0] == doctest::Approx(1.90e-5));
}

TEST_CASE("MeasurementNoise rejects non-positive or non-finite entries") {
    CHECK_THROWS_AS(MeasurementNoise::from_std(Vector4(1, 1, 0, 1)), DomainError);
    CHECK_THROWS_AS(MeasurementNoise::from_variances(Vector4(1, -1, 1, 1)), DomainError);
    CHECK_THROWS_AS(MeasurementNoise::from_std(Vector4(1, 1, NAN, 1)), DomainError);
}

TEST_CASE("longitude sigma for a 2 m excursion at the equator and at 70N") {
    const ProcessNoiseParams p;
    CHECK(longitude_sigma(p, 0.0) == doctest::Approx(1.78e-5).epsilon(0.01));
    CHECK(longitude_sigma(p, 70.0) == doctest::Approx(5.25e-5).epsilon(0.01));
    CHECK(longitude_sigma(p, -70.0) == doctest::Approx(longitude_sigma(p, 70.0)));
    CHECK(latitude_sigma(p) == doctest::Approx(2.0 / 111319.5));
    CHECK_THROWS_AS(longitude_sigma(p, 90.0), DomainError);
}

TEST_CASE("process noise cross terms follow the course") {
    const ProcessNoiseParams p;
    const double s_lon = longitude_sigma(p, 42.0);
    const double s_lat = latitude_sigma(p);

    const Matrix4 north = build_process_noise(p, 42.0, 0.0, 1.0);
    CHECK(north(0, 2) == doctest::Approx(0.0));
    CHECK(north(1, 2) == doctest::Approx(s_lat * s_lat));

    const Matrix4 east = build_process_noise(p, 42.0, 90.0, 1.0);
    CHECK(east(0, 2) == doctest::Approx(s_lon * s_lon));
    CHECK(east(1, 2) == doctest::Approx(0.0).epsilon(1e-20));

    CHECK(north(2, 2) == doctest::Approx(0.08 * 0.08));
    CHECK(north(3, 3) == doctest::Approx(1.2 * 1.2));
    CHECK(north(0, 3) == 0.0);
    CHECK(north(0, 1) == 0.0);
}

TEST_CASE("process noise scales with dt") {
    ProcessNoiseParams p;
    const Matrix4 q1 = build_process_noise(p, 10.0, 30.0, 1.0);
    const Matrix4 q6 = build_process_noise(p, 10.0, 30.0, 6.0);
    // position diagonal picks up dt twice as printed
    CHECK(q6(0, 0) == doctest::Approx(36.0 * q1(0, 0)));
    CHECK(q6(2, 2) == doctest::Approx(6.0 * q1(2, 2)));
    CHECK(q6(3, 3) == doctest::Approx(6.0 * q1(3, 3)));

    p.position_scaling = PositionDtScaling::Single;
    const Matrix4 s6 = build_process_noise(p, 10.0, 30.0, 6.0);
    CHECK(s6(0, 0) == doctest::Approx(6.0 * q1(0, 0)));
}

TEST_CASE("process noise is symmetric and positive semidefinite everywhere") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> lat(-89.0, 89.0), cog(0.0, 360.0), dt(0.01, 120.0);
    const ProcessNoiseParams p;
    for (int i = 0; i < 5000; ++i) {
        const Matrix4 q = build_process_noise(p, lat(rng), cog(rng), dt(rng));
        CHECK(asymmetry(q) == 0.0);
        CHECK(min_eigenvalue(q) >= -1e-18);
    }
}

TEST_CASE("process noise domain errors") {
    ProcessNoiseParams p;
    CHECK_THROWS_AS(build_process_noise(p, 90.0, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(build_process_noise(p, 0.0, 0.0, 0.0), DomainError);
    p.sigma_u = 0.0;
    CHECK_THROWS_AS(build_process_noise(p, 0.0, 0.0, 1.0), DomainError);
}

TEST_CASE("nearest_psd clips negative eigenvalues and keeps PSD input") {
    Matrix4 m = Matrix4::Identity();
    m(0, 0) = -2.0;
    const Matrix4 fixed = nearest_psd(m);
    CHECK(min_eigenvalue(fixed) >= -1e-15);
    CHECK(fixed(0, 0) == doctest::Approx(0.0));
    CHECK(fixed(1, 1) == doctest::Approx(1.0));
    const Matrix4 spd = Vector4(1, 2, 3, 4).asDiagonal();
    CHECK((nearest_psd(spd) - spd).norm() == 0.0);
    Matrix4 a = Matrix4::Zero();
    a(0, 1) = 1.0;
    CHECK(asymmetry(a) == 1.0);
    CHECK(symmetrized(a)(1, 0) == 0.5);
}

TEST_CASE("wavenumber satisfies the dispersion relation") {
    for (double T : {2.0, 5.0, 9.1, 19.7}) {
        for (double h : {2.0, 20.0, 1000.0}) {
            const double k = solve_wavenumber(T, h);
            const double w = 2.0 * std::numbers::pi / T;
            CHECK(kStandardGravity * k * std::tanh(k * h) == doctest::Approx(w * w).epsilon(1e-10));
        }
    }
    // deep water: k = w^2 / g; shallow: k ~ w / sqrt(g h)
    const double w = 2.0 * std::numbers::pi / 5.0;
    CHECK(solve_wavenumber(5.0, 5000.0) == doctest::Approx(w * w / kStandardGravity).epsilon(1e-9));
    CHECK(solve_wavenumber(60.0, 0.5) ==
          doctest::Approx(2.0 * std::numbers::pi / 60.0 / std::sqrt(kStandardGravity * 0.5)).epsilon(1e-3));
    CHECK_THROWS_AS(solve_wavenumber(0.0, 10.0), DomainError);
}

TEST_CASE("deep-water orbital radius tends to H/2 and velocity to pi H / T") {
    const WaveKinematics w = wave_orbital_kinematics(3.0, 8.0, 5000.0);
    CHECK(w.zeta == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(w.u_max == doctest::Approx(std::numbers::pi * 3.0 / 8.0).epsilon(1e-12));
    // finite depth amplifies both
    const WaveKinematics s = wave_orbital_kinematics(3.0, 8.0, 10.0);
    CHECK(s.zeta > w.zeta);
    CHECK(s.u_max > w.u_max);
    CHECK_THROWS_AS(wave_orbital_kinematics(-1.0, 8.0), DomainError);
    CHECK_THROWS_AS(wave_orbital_kinematics(1.0, 8.0, 0.0), DomainError);
}

TEST_CASE("fully developed sea states reproduce the tabulated kinematics within 5%") {
    const auto states = reference_sea_states();
    REQUIRE(states.size() == 7);
    CHECK(states.front().beaufort == 4);
    CHECK(states.back().beaufort == 10);
    for (const SeaState& s : states) {
        const WaveKinematics w = wave_orbital_kinematics(s.hs, s.tp);
        CAPTURE(s.beaufort);
        CHECK(std::abs(w.zeta - s.zeta_ref) / s.zeta_ref <= 0.05);
        CHECK(std::abs(w.u_max - s.u_max_ref) / s.u_max_ref <= 0.05);
    }
    const SeaState b4 = states[0];
    CHECK(b4.hs == 1.0);
    CHECK(b4.tp == 5.0);
    CHECK(b4.zeta_ref == 0.5);
    CHECK(b4.u_max_ref == 0.62);
    const SeaState b7 = states[3];
    CHECK(b7.hs == 5.3);
    CHECK(b7.zeta_ref == 2.65);
    CHECK(b7.u_max_ref == 1.45);
}
