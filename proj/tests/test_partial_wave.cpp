// abscat: Aharonov-Bohm scattering off a magnetic vortex in conical space.
// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "abscat/partial_wave.hpp"

using namespace abscat;

namespace {

// Idealized-vortex amplitude in flat space, derived in closed form from the
// Abel limit of the mode sum (independent of the engine's summation path):
// f_0(phi) = i sin(pi alpha) e^{i phi/2} / (sqrt(2 pi k) sin(phi/2)),
// valid for 0 < alpha < 1.
complexd ab_closed_form(double alpha, double k, double phi) {
    return complexd(0.0, 1.0) * std::sin(pi * alpha) * std::polar(1.0, 0.5 * phi) /
           (std::sqrt(2.0 * pi * k) * std::sin(0.5 * phi));
}

}  // namespace

TEST_CASE("mode_order") {
    CHECK(mode_order(0, {.alpha = 0.0, .eta = 0.0}, 0.0) == 0.0);
    CHECK(mode_order(1, {.alpha = 0.5, .eta = 0.0}, 0.5) == 0.5);
    CHECK(mode_order(2, {.alpha = 0.5, .eta = 0.25}, 0.5) == Catch::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("build_phase_shifts") {
    SECTION("half-integer order closed form at alpha = 1/2") {
        const ScatterConfig c{.alpha = 0.5, .eta = 0.0, .r_c = 1.0};
        const Kinematics kin{2.0};
        const auto t = build_phase_shifts(c, kin);
        const double x = 2.0;
        const complexd expect = std::sin(x) / complexd(std::sin(x), -std::cos(x));
        CHECK(t.at(0).nu == 0.5);
        CHECK(t.at(0).core_factor.real() == Catch::Approx(expect.real()).margin(1e-13));
        CHECK(t.at(0).core_factor.imag() == Catch::Approx(expect.imag()).margin(1e-13));
    }
    SECTION("entries n and 1-n coincide at alpha = 1/2") {
        const ScatterConfig c{.alpha = 0.5, .eta = 0.0, .r_c = 1.0};
        const auto t = build_phase_shifts(c, Kinematics{5.0});
        for (int n = 1; n <= 6; ++n) {
            CHECK(t.at(n).nu == t.at(1 - n).nu);
            CHECK(t.at(n).core_factor == t.at(1 - n).core_factor);
        }
    }
    SECTION("tiny core: every mode except the s-wave is negligible") {
        const ScatterConfig c{.alpha = 0.0, .eta = 0.0, .r_c = 1.0};
        const auto t = build_phase_shifts(c, Kinematics{1e-8});
        for (int n = -t.n_max; n <= t.n_max; ++n) {
            if (n == 0) continue;
            CHECK(std::abs(t.at(n).core_factor) < 1e-7);
        }
        // the log-suppressed s-wave survives the idealized limit
        CHECK(std::abs(t.at(0).core_factor) > 1e-3);
    }
    SECTION("per-mode unitarity |1 - 2 a_n| = 1") {
        for (double eta : {0.0, 0.2, -0.5}) {
            const ScatterConfig c{.alpha = 0.3, .eta = eta, .r_c = 1.0};
            const auto t = build_phase_shifts(c, Kinematics{20.0});
            for (int n = -t.n_max; n <= t.n_max; ++n) {
                if (t.at(n).core_factor == complexd{0.0, 0.0}) continue;
                CHECK(std::abs(1.0 - 2.0 * t.at(n).core_factor) ==
                      Catch::Approx(1.0).epsilon(1e-10));
            }
        }
    }
    SECTION("evanescent envelope decreases") {
        const ScatterConfig c{.alpha = 0.25, .eta = 0.1, .r_c = 1.0};
        const Kinematics kin{12.0};
        const auto t = build_phase_shifts(c, kin);
        double prev = 1.0;
        bool started = false;
        for (int n = 0; n <= t.n_max; ++n) {
            if (t.at(n).nu < hardness(c, kin) + 2.0) continue;
            const double m = std::abs(t.at(n).core_factor);
            if (started) CHECK(m <= prev * (1.0 + 1e-12));
            prev = m;
            started = true;
        }
    }
    SECTION("mode count below the coverage floor is a configuration error") {
        SummationParams p;
        p.n_max = 5;
        CHECK_THROWS_AS(
            build_phase_shifts({.alpha = 0.0, .eta = 0.0, .r_c = 1.0}, Kinematics{20.0}, p),
            ConfigError);
        p.n_max = 0;
        p.airy_margin = 2.0;
        CHECK_THROWS_AS(
            build_phase_shifts({.alpha = 0.0, .eta = 0.0, .r_c = 1.0}, Kinematics{20.0}, p),
            ConfigError);
    }
}

TEST_CASE("identity_kernel") {
    const Kinematics kin{3.0};
    SECTION("free flat space") {
        const auto id = identity_kernel({.alpha = 0.0, .eta = 0.0}, kin);
        REQUIRE(id.terms.size() == 1);
        CHECK(id.terms[0].shift == 0.0);
        CHECK(id.terms[0].weight == 1.0);
        CHECK(id.terms[0].phase == complexd{1.0, 0.0});
        CHECK(id.overall_phase == complexd{1.0, 0.0});
    }
    SECTION("half flux kills the forward transmission") {
        const auto id = identity_kernel({.alpha = 0.5, .eta = 0.0}, kin);
        REQUIRE(id.terms.size() == 1);
        CHECK(std::abs(id.terms[0].weight) < 1e-15);
    }
    SECTION("conical structure") {
        const auto id = identity_kernel({.alpha = 0.25, .eta = 0.2}, kin);
        REQUIRE(id.terms.size() == 2);
        const double w = opening_angle(0.2);
        CHECK(w == Catch::Approx(0.7853981633974483).epsilon(1e-15));
        CHECK(id.terms[0].shift == Catch::Approx(+w));
        CHECK(id.terms[1].shift == Catch::Approx(-w));
        CHECK(id.terms[0].weight == 0.5);
        CHECK(id.terms[1].weight == 0.5);
        const double beta = 0.25 * (pi + w);
        CHECK(id.terms[0].phase.real() == Catch::Approx(std::cos(beta)).epsilon(1e-14));
        CHECK(id.terms[0].phase.imag() == Catch::Approx(std::sin(beta)).epsilon(1e-14));
        CHECK(id.terms[1].phase.imag() == Catch::Approx(-std::sin(beta)).epsilon(1e-14));
        // xi_c = r_c: overall phase is exactly 1
        CHECK(id.overall_phase.real() == Catch::Approx(1.0).epsilon(1e-14));
        CHECK(std::abs(id.overall_phase.imag()) < 1e-14);
    }
    SECTION("Euclidean reduction: conical term sum tends to cos(pi alpha)") {
        for (double alpha : {0.1, 0.37, 0.5}) {
            const auto id = identity_kernel({.alpha = alpha, .eta = 1e-9}, kin);
            complexd sum{0.0, 0.0};
            for (const auto& t : id.terms) sum += t.weight * t.phase;
            CHECK(sum.real() == Catch::Approx(std::cos(pi * alpha)).margin(1e-7));
            CHECK(std::abs(sum.imag()) < 1e-7);
        }
    }
}

TEST_CASE("incident_wave") {
    SECTION("flat-space backward point is the plane wave") {
        const Kinematics kin{2.0};
        const auto v = incident_wave({.alpha = 0.0, .eta = 0.0}, kin, 7.0, pi);
        const complexd expect = std::polar(1.0, -2.0 * 7.0);
        CHECK(v.real() == Catch::Approx(expect.real()).margin(1e-13));
        CHECK(v.imag() == Catch::Approx(expect.imag()).margin(1e-13));
        // AB phase factor is 1 at phi = pi for any alpha
        const auto v2 = incident_wave({.alpha = 0.5, .eta = 0.0}, kin, 7.0, pi);
        CHECK(std::abs(v2 - expect) < 1e-12);
    }
    SECTION("double-image region: two-term sum vs direct reimplementation") {
        const ScatterConfig c{.alpha = 0.0, .eta = 0.2, .r_c = 1.0};
        const Kinematics kin{50.0};
        const double r = 1.5, phi = 0.0;
        const complexd got = incident_wave(c, kin, r, phi);
        const double arg = (1.0 - c.eta) * pi;
        const complexd expect = 2.0 * (1.0 - c.eta) * std::polar(1.0, -kin.k * r * std::cos(arg));
        CHECK(got.real() == Catch::Approx(expect.real()).margin(1e-12));
        CHECK(got.imag() == Catch::Approx(expect.imag()).margin(1e-12));
        CHECK(std::abs(got) == Catch::Approx(2.0 * (1.0 - c.eta)).epsilon(1e-13));

        // generic angles, with flux
        const ScatterConfig cf{.alpha = 0.3, .eta = 0.2, .r_c = 1.0};
        for (double p : {0.3, -0.5, 0.7}) {
            const complexd w = incident_wave(cf, kin, 2.5, p);
            complexd ref{0.0, 0.0};
            for (double sgn : {+1.0, -1.0})
                ref += 0.8 * std::polar(1.0, -kin.k * 2.5 * std::cos(0.8 * (p - sgn * pi)) +
                                                 0.3 * (p - sgn * pi));
            CHECK(std::abs(w - ref) < 1e-12);
        }
    }
    SECTION("single-image and shadow branch selection") {
        const Kinematics kin{50.0};
        const ScatterConfig pos{.alpha = 0.1, .eta = 0.2, .r_c = 1.0};
        const double w = opening_angle(0.2);
        // single image: exactly one branch, amplitude (1-eta)
        CHECK(std::abs(incident_wave(pos, kin, 2.0, w + 0.3)) == Catch::Approx(0.8).epsilon(1e-13));
        CHECK(std::abs(incident_wave(pos, kin, 2.0, -w - 0.3)) == Catch::Approx(0.8).epsilon(1e-13));
        const ScatterConfig neg{.alpha = 0.1, .eta = -0.5, .r_c = 1.0};
        CHECK(incident_wave(neg, kin, 2.0, 0.0) == complexd{0.0, 0.0});  // shadow
        CHECK(std::abs(incident_wave(neg, kin, 2.0, 2.0)) == Catch::Approx(1.5).epsilon(1e-13));
    }
    SECTION("regime and domain errors") {
        CHECK_THROWS_AS(incident_wave({.alpha = 0.0, .eta = 0.6}, Kinematics{1.0}, 2.0, 0.1),
                        RegimeError);
        CHECK_THROWS_AS(incident_wave({.alpha = 0.0, .eta = 0.0}, Kinematics{1.0}, 0.5, 0.1),
                        DomainError);
    }
}

TEST_CASE("idealized-vortex amplitude matches the closed form") {
    // f_0 is independent of the core radius; the engine value must agree
    // with the analytic Abel limit at ~1e-9 relative.
    SummationParams p;
    for (const auto& [alpha, krc, phi] : std::vector<std::tuple<double, double, double>>{
             {0.3, 20.0, 2.2}, {0.3, 20.0, -1.1}, {0.7, 20.0, 0.9}, {0.45, 60.0, 2.9}}) {
        const ScatterConfig c{.alpha = alpha, .eta = 0.0, .r_c = 1.0};
        const Kinematics kin{krc};
        const auto parts = exact_amplitude_parts(c, kin, phi, p);
        const complexd expect = ab_closed_form(alpha, kin.k, phi);
        INFO("alpha=" << alpha << " phi=" << phi);
        CHECK(std::abs(parts.f0 - expect) < 1e-9 * std::abs(expect));
    }
}

TEST_CASE("long-wavelength limit: idealized vortex dominates") {
    // k r_c = 1e-4; |f|^2 approaches the idealized cross section
    // sin^2(pi alpha)/(2 pi k sin^2(phi/2)) up to the log-suppressed s-wave.
    const ScatterConfig c{.alpha = 0.3, .eta = 0.0, .r_c = 1.0};
    const Kinematics kin{1e-4};
    const double phi = 0.5 * pi;
    SummationParams abel;
    abel.eps_sing = 0.05;  // spec default guard formula is meaningless here
    const auto parts = exact_amplitude_parts(c, kin, phi, abel);
    const double closed = std::norm(ab_closed_form(0.3, kin.k, phi));
    CHECK(closed == Catch::Approx(2083.36).epsilon(1e-3));
    CHECK(std::norm(parts.f()) == Catch::Approx(closed).epsilon(0.03));

    SECTION("dual-regulator cross-check: Abel vs Gaussian vs Cesaro") {
        SummationParams gauss = abel;
        gauss.regulator = RegulatorKind::Gaussian;
        const auto pg = exact_amplitude_parts(c, kin, phi, gauss);
        CHECK(std::norm(pg.f()) == Catch::Approx(std::norm(parts.f())).epsilon(1e-6));
        SummationParams cesaro = abel;
        cesaro.regulator = RegulatorKind::Cesaro;
        const auto pc = exact_amplitude_parts(c, kin, phi, cesaro);
        CHECK(std::norm(pc.f()) == Catch::Approx(std::norm(parts.f())).epsilon(1e-3));
    }
}

TEST_CASE("regulator independence at kr_c = 20") {
    const ScatterConfig c{.alpha = 0.3, .eta = 0.0, .r_c = 1.0};
    const Kinematics kin{20.0};
    SummationParams abel;
    SummationParams gauss;
    gauss.regulator = RegulatorKind::Gaussian;
    for (double phi : {0.7, 1.0, 2.2, -2.8}) {
        const double a = std::norm(exact_amplitude_parts(c, kin, phi, abel).f());
        const double g = std::norm(exact_amplitude_parts(c, kin, phi, gauss).f());
        INFO("phi=" << phi);
        CHECK(g == Catch::Approx(a).epsilon(1e-6));
    }
}

TEST_CASE("flux periodicity and flux-reversal parity") {
    SummationParams p;
    for (double eta : {0.0, 0.2}) {
        const Kinematics kin{10.0};
        for (double phi : {2.5, -2.2, 3.0}) {
            const ScatterConfig a{.alpha = 0.3, .eta = eta, .r_c = 1.0};
            const ScatterConfig b{.alpha = 1.3, .eta = eta, .r_c = 1.0};
            const double fa = std::norm(exact_amplitude_parts(a, kin, phi, p).f());
            const double fb = std::norm(exact_amplitude_parts(b, kin, phi, p).f());
            INFO("eta=" << eta << " phi=" << phi);
            CHECK(fb == Catch::Approx(fa).epsilon(1e-10));

            const ScatterConfig neg{.alpha = -0.3, .eta = eta, .r_c = 1.0};
            const double fr = std::norm(exact_amplitude_parts(neg, kin, -phi, p).f());
            CHECK(fr == Catch::Approx(fa).epsilon(1e-12));
        }
    }
}

TEST_CASE("forward null at half-integer flux") {
    // pairwise cancellation of the regulated wave: modes n and 1-n share
    // nu = |n - 1/2| and enter with opposite sign.
    for (double krc : {1.0, 5.0}) {
        const ScatterConfig c{.alpha = 0.5, .eta = 0.0, .r_c = 1.0};
        const Kinematics kin{krc};
        const complexd w = forward_wave_amplitude(c, kin);
        INFO("krc=" << krc);
        CHECK(std::abs(w) < 1e-6);
        // a generic flux has a large regulated identity part instead
        const ScatterConfig g{.alpha = 0.2, .eta = 0.0, .r_c = 1.0};
        CHECK(std::abs(forward_wave_amplitude(g, kin)) > 1.0);
    }
}

TEST_CASE("singular-direction guard") {
    const ScatterConfig c{.alpha = 0.3, .eta = 0.0, .r_c = 1.0};
    const Kinematics kin{20.0};
    SummationParams p;  // default guard radius 10/(k r_c) = 0.5
    CHECK_THROWS_AS(exact_amplitude_parts(c, kin, 0.2, p), DomainError);
    p.allow_singular = true;
    const auto parts = exact_amplitude_parts(c, kin, 0.2, p);
    CHECK(parts.distributional);
    const auto clear = exact_amplitude_parts(c, kin, 2.0, p);
    CHECK_FALSE(clear.distributional);
}

TEST_CASE("exact_amplitude over a grid") {
    const Kinematics kin{20.0};
    const auto grid = AngleGrid::uniform(0.7, 2.9, 12);
    SECTION("spinless: one sample per angle, tier-tagged") {
        const auto samples = exact_amplitude({.alpha = 0.3, .eta = 0.0, .r_c = 1.0}, kin, grid);
        REQUIRE(samples.size() == 12);
        CHECK(samples.front().tier == "exact");
        CHECK(samples.front().weight == 1.0);
    }
    SECTION("unpolarized: coherent per branch, two samples per angle") {
        ScatterConfig c{.alpha = 0.3, .eta = 0.2, .r_c = 1.0};
        c.spin = SpinMode::Unpolarized;
        SummationParams p;
        p.allow_singular = true;  // grid straddles the +omega identity direction
        const auto samples = exact_amplitude(c, kin, grid, p);
        REQUIRE(samples.size() == 24);
        CHECK(samples[0].alpha_eff == Catch::Approx(0.2));
        CHECK(samples[12].alpha_eff == Catch::Approx(0.4));
        CHECK(samples[0].weight == 0.5);
        // cross-section assembly averages the branches
        const auto table = exact_cross_section(c, kin, grid, p);
        const double manual =
            0.5 * std::norm(samples[0].f) + 0.5 * std::norm(samples[12].f);
        CHECK(table.rows[0].value == Catch::Approx(manual).epsilon(1e-12));
    }
}

TEST_CASE("short-wavelength core cross section approaches 4 r_c (1 - eta)") {
    // The core part f_c carries the quasiclassical total (reflection + peak);
    // the long-range idealized tail f_0 has a non-integrable forward
    // singularity and is excluded here.
    SummationParams p;
    p.allow_singular = true;
    for (double eta : {0.0, 0.2}) {
        const ScatterConfig c{.alpha = 0.25, .eta = eta, .r_c = 1.0};
        const Kinematics kin{60.0};
        const auto grid = AngleGrid::uniform(-pi, pi, 4001);
        const auto parts = exact_amplitude_parts_grid(c, kin, grid, p);
        double integral = 0.0;
        for (std::size_t i = 0; i + 1 < grid.size(); ++i)
            integral += 0.5 * (std::norm(parts[i].fc) + std::norm(parts[i + 1].fc)) *
                        (grid[i + 1] - grid[i]);
        INFO("eta=" << eta);
        CHECK(integral == Catch::Approx(4.0 * (1.0 - eta)).epsilon(0.08));
    }
}

TEST_CASE("exact_cross_section is thread-count invariant") {
    const ScatterConfig c{.alpha = 0.3, .eta = -0.5, .r_c = 1.0};
    const Kinematics kin{15.0};
    const auto grid = AngleGrid::uniform(-3.0, 3.0, 41);
    SummationParams p;
    p.allow_singular = true;
    const auto t1 = exact_cross_section(c, kin, grid, p, 1);
    const auto t4 = exact_cross_section(c, kin, grid, p, 4);
    REQUIRE(t1.rows.size() == t4.rows.size());
    for (std::size_t i = 0; i < t1.rows.size(); ++i) {
        CHECK(t1.rows[i].value == t4.rows[i].value);  // bitwise
        CHECK(t1.rows[i].flag == t4.rows[i].flag);
    }
}
