#include "doctest.h"

#include <cmath>
#include <numbers>

#include "fixture_io.hpp"
#include "nic/error.hpp"
#include "nic/specfun.hpp"

using namespace nic;
using std::numbers::pi;

TEST_CASE("J and Y match the high-precision table") {
    const auto rows = load_bessel_fixtures();
    REQUIRE(rows.size() >= 300);
    for (const auto& r : rows) {
        INFO("m=" << r.m << " z=" << r.z);
        CHECK(std::abs(bessel_j(r.m, r.z) - r.j) <= 1e-10 * std::abs(r.j));
        CHECK(std::abs(bessel_y(r.m, r.z) - r.y) <= 1e-10 * std::abs(r.y));
    }
}

TEST_CASE("sequences agree with single evaluations") {
    for (double z : {0.7, 9.0, 30.0, 333.0}) {
        const auto J = bessel_j_sequence(50, z);
        const auto Y = bessel_y_sequence(50, z);
        const auto H = hankel1_scaled_sequence(50, z);
        REQUIRE(J.size() == 51);
        for (int m : {0, 1, 17, 50}) {
            CHECK(J[m] == doctest::Approx(bessel_j(m, z)).epsilon(1e-13));
            CHECK(Y[m] == doctest::Approx(bessel_y(m, z)).epsilon(1e-13));
            CHECK(std::abs(H[m] - hankel1_scaled(m, z)) <= 1e-13 * std::abs(H[m]));
        }
    }
}

TEST_CASE("small arguments") {
    CHECK(bessel_j(0, 1e-8) == 1.0);
    CHECK(bessel_j(1, 1e-6) / 1e-6 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(bessel_y(0, 1e-4) == doctest::Approx(-5.9371).epsilon(1e-4));
}

TEST_CASE("three-term recurrence") {
    for (double z : {2.5, 24.9, 25.1, 80.0, 1500.0}) {
        const auto J = bessel_j_sequence(60, z);
        const auto Y = bessel_y_sequence(60, z);
        for (int m = 1; m < 60; m += 7) {
            INFO("m=" << m << " z=" << z);
            const double scale_j = std::max({std::abs(J[m - 1]), std::abs(J[m + 1]), 1e-300});
            CHECK(std::abs(J[m - 1] + J[m + 1] - 2.0 * m / z * J[m]) <= 1e-12 * scale_j * (1 + 2.0 * m / z));
            const double scale_y = std::max(std::abs(Y[m - 1]), std::abs(Y[m + 1]));
            CHECK(std::abs(Y[m - 1] + Y[m + 1] - 2.0 * m / z * Y[m]) <= 1e-12 * scale_y * (1 + 2.0 * m / z));
        }
    }
}

TEST_CASE("Wronskian beyond the certified range") {
    for (double z : {450.0, 999.0, 1001.0, 5000.0}) {
        const auto J = bessel_j_sequence(101, z);
        const auto Y = bessel_y_sequence(101, z);
        for (int m = 0; m <= 100; m += 10) {
            const double w = J[m + 1] * Y[m] - J[m] * Y[m + 1];
            CHECK(w == doctest::Approx(2.0 / (pi * z)).epsilon(1e-10));
        }
    }
}

TEST_CASE("scaled Hankel function is continuous across the method switch") {
    for (int m : {0, 1, 5, 20}) {
        const auto below = hankel1_scaled(m, 25.0 - 1e-12);
        const auto above = hankel1_scaled(m, 25.0 + 1e-12);
        CHECK(std::abs(below - above) <= 1e-10 * std::abs(above));
    }
}

TEST_CASE("scaled Hankel function approaches its large-argument form") {
    for (int m : {0, 3, 20}) {
        const double z = 1e6;
        const cplx expected =
            std::sqrt(2.0 / (pi * z)) * std::polar(1.0, -pi * (0.5 * m + 0.25));
        // leading correction is (4m^2 - 1)/(8z)
        const double tol = 2.0 * (4.0 * m * m + 1.0) / (8.0 * z);
        CHECK(std::abs(hankel1_scaled(m, z) - expected) <= tol * std::abs(expected));
    }
}

TEST_CASE("far-field limit") {
    const cplx f = farfield_limit(20, 40.0, 1.0);
    CHECK(std::abs(f) == doctest::Approx(std::sqrt(2.0 / (40.0 * pi))).epsilon(1e-15));
    const cplx g = farfield_limit(0, 40.0, 40.0);
    CHECK(std::arg(g) == doctest::Approx(1.0 - pi / 4.0).epsilon(1e-14));
}

TEST_CASE("envelope errors") {
    CHECK_THROWS_AS(bessel_j(0, 0.0), DomainError);
    CHECK_THROWS_AS(bessel_y(1, -1.0), DomainError);
    CHECK_THROWS_AS(hankel1_scaled(kMaxBesselOrder + 1, 10.0), UnsupportedError);
    CHECK_THROWS_AS(bessel_j(-1, 1.0), UnsupportedError);
}
