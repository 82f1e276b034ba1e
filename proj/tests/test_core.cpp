// abscat: Aharonov-Bohm scattering off a magnetic vortex in conical space.
// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "abscat/core.hpp"

using namespace abscat;

TEST_CASE("opening_angle values and sign") {
    CHECK(opening_angle(0.0) == 0.0);
    CHECK(opening_angle(0.5) == Catch::Approx(pi).epsilon(1e-15));
    CHECK(opening_angle(1.0 / 6.0) == Catch::Approx(pi / 5.0).epsilon(1e-15));
    CHECK(opening_angle(1.0 / 6.0) == Catch::Approx(0.6283185).epsilon(1e-6));
    CHECK_THROWS_AS(opening_angle(1.0), DomainError);
    CHECK_THROWS_AS(opening_angle(1.5), DomainError);

    std::mt19937 rng(99);
    std::uniform_real_distribution<double> etas(-8.0, 0.999);
    for (int i = 0; i < 200; ++i) {
        const double eta = etas(rng);
        if (eta == 0.0) continue;
        CHECK(std::signbit(opening_angle(eta)) == std::signbit(eta));
    }
}

TEST_CASE("effective_flux spin rule") {
    SECTION("spinless, flat space") {
        const auto b = effective_flux({.alpha = 0.5, .eta = 0.0});
        REQUIRE(b.size() == 1);
        CHECK(b[0].alpha_eff == 0.5);
        CHECK(b[0].weight == 1.0);
    }
    SECTION("polarized up shifts by -eta/2") {
        ScatterConfig c{.alpha = 0.5, .eta = 1.0 / 6.0};
        c.spin = SpinMode::SpinUp;
        const auto b = effective_flux(c);
        REQUIRE(b.size() == 1);
        CHECK(b[0].alpha_eff == Catch::Approx(0.41666666666666666).epsilon(1e-15));
    }
    SECTION("unpolarized is the equal-weight mixture") {
        ScatterConfig c{.alpha = 0.0, .eta = 0.2};
        c.spin = SpinMode::Unpolarized;
        const auto b = effective_flux(c);
        REQUIRE(b.size() == 2);
        CHECK(b[0].alpha_eff == Catch::Approx(-0.1).margin(1e-15));
        CHECK(b[1].alpha_eff == Catch::Approx(+0.1).margin(1e-15));
        CHECK(b[0].weight == 0.5);
        CHECK(b[1].weight == 0.5);
    }
}

TEST_CASE("classify_region") {
    CHECK(classify_region(-1.0, 0.0) == RegionKind::Shadow);
    CHECK(classify_region(0.2, 0.0) == RegionKind::DoubleImage);
    CHECK(classify_region(0.0, 0.3) == RegionKind::SingleImage);
    CHECK(classify_region(0.0, -2.9) == RegionKind::SingleImage);
    CHECK_THROWS_AS(classify_region(0.5, 0.0), RegimeError);
    CHECK_THROWS_AS(classify_region(0.7, 0.0), RegimeError);

    SECTION("boundary belongs to the single-image region") {
        const double w = opening_angle(0.2);
        CHECK(classify_region(0.2, w) == RegionKind::SingleImage);
        CHECK(classify_region(0.2, std::nextafter(w, 0.0)) == RegionKind::DoubleImage);
    }

    SECTION("even in phi") {
        std::mt19937 rng(7);
        std::uniform_real_distribution<double> etas(-3.0, 0.499);
        std::uniform_real_distribution<double> phis(0.0, pi);
        for (int i = 0; i < 300; ++i) {
            const double eta = etas(rng);
            const double phi = phis(rng);
            CHECK(classify_region(eta, phi) == classify_region(eta, -phi));
        }
    }
}

TEST_CASE("reduce_flux canonicalization") {
    CHECK(reduce_flux(1.5) == -0.5);
    CHECK(reduce_flux(0.25) == 0.25);
    CHECK(reduce_flux(-0.75) == Catch::Approx(0.25).margin(1e-15));

    std::mt19937 rng(21);
    std::uniform_real_distribution<double> alphas(-20.0, 20.0);
    for (int i = 0; i < 500; ++i) {
        const double a = alphas(rng);
        const double r = reduce_flux(a);
        CHECK(r >= -0.5);
        CHECK(r < 0.5);
        // reduction differs from the input by an integer and is idempotent
        CHECK(std::abs(std::remainder(a - r, 1.0)) < 1e-12);
        CHECK(reduce_flux(r) == r);
    }
}

TEST_CASE("ScatterConfig invariants") {
    CHECK_NOTHROW((ScatterConfig{.alpha = 0.3, .eta = -5.0, .r_c = 2.0}.validate()));
    CHECK_THROWS_AS((ScatterConfig{.alpha = 0.0, .eta = 1.0}.validate()), DomainError);
    CHECK_THROWS_AS((ScatterConfig{.alpha = 0.0, .eta = 0.0, .r_c = 0.0}.validate()), DomainError);
    CHECK_THROWS_AS(
        (ScatterConfig{.alpha = 0.0, .eta = 0.0, .r_c = 1.0, .xi_c = -1.0}.validate()),
        DomainError);

    ScatterConfig c{.alpha = 0.0, .eta = 0.0, .r_c = 3.0};
    CHECK(c.geodesic_radius() == 3.0);  // xi_c defaults to r_c
    c.xi_c = 2.5;
    CHECK(c.geodesic_radius() == 2.5);
}

TEST_CASE("AngleGrid construction") {
    const auto g = AngleGrid::uniform(-pi, pi, 5);
    REQUIRE(g.size() == 5);
    CHECK(g[0] == -pi);
    CHECK(g[4] == pi);
    CHECK(g[2] == Catch::Approx(0.0).margin(1e-15));
    CHECK_THROWS_AS(AngleGrid::uniform(0.0, 1.0, 1), ConfigError);
    CHECK_THROWS_AS(AngleGrid::uniform(1.0, 0.0, 5), ConfigError);
    CHECK_THROWS_AS((AngleGrid(std::vector<double>{0.0, 0.0})), ConfigError);
    CHECK_THROWS_AS((AngleGrid(std::vector<double>{1.0, 0.5})), ConfigError);
    CHECK_THROWS_AS(AngleGrid(std::vector<double>{}), ConfigError);
}

TEST_CASE("wrap_angle conventions") {
    CHECK(wrap_angle(pi) == Catch::Approx(pi));
    CHECK(wrap_angle(-pi) == Catch::Approx(pi));
    CHECK(wrap_angle(3.0 * pi) == Catch::Approx(pi));
    CHECK(wrap_angle(0.25) == 0.25);
    CHECK(wrap_angle_2pi(-0.25) == Catch::Approx(two_pi - 0.25));
}

TEST_CASE("single_branch_alpha guards unpolarized conical configs") {
    ScatterConfig c{.alpha = 0.3, .eta = 0.2};
    c.spin = SpinMode::Unpolarized;
    CHECK_THROWS_AS(single_branch_alpha(c), ConfigError);
    c.eta = 0.0;  // branches coincide in flat space
    CHECK(single_branch_alpha(c) == 0.3);
    c.eta = 0.2;
    c.spin = SpinMode::SpinDown;
    CHECK(single_branch_alpha(c) == Catch::Approx(0.4).margin(1e-15));
}
