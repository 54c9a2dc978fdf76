#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "shipctl/model.hpp"

using namespace shipctl;

namespace {

ShipState random_state(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> d(-10.0, 10.0);
    return {d(rng), d(rng), d(rng), d(rng), d(rng), d(rng)};
}

}  // namespace

TEST_CASE("derive_reduced: benchmark parameters") {
    const ReducedParams rp = derive_reduced(ShipParams::defaults());
    CHECK(rp.a == doctest::Approx(0.02992603550295858).epsilon(1e-14));
    CHECK(rp.b == doctest::Approx(-0.0076952662721893491).epsilon(1e-14));
    CHECK(rp.c == doctest::Approx(0.76331360946745562).epsilon(1e-14));
    CHECK(rp.d == doctest::Approx(0.085529585798816568).epsilon(1e-14));
    CHECK(rp.delta == doctest::Approx(92.26486775).epsilon(1e-14));
}

TEST_CASE("derive_reduced: rejects invalid parameters") {
    auto broken = [](auto&& mutate) {
        ShipParams p;
        mutate(p);
        return p;
    };
    CHECK_THROWS_AS(derive_reduced(broken([](ShipParams& p) { p.m23 = 0; })),
                    std::invalid_argument);
    CHECK_THROWS_AS(derive_reduced(broken([](ShipParams& p) { p.d23 = 0; })),
                    std::invalid_argument);
    // delta = 0, boundary of invertibility
    CHECK_THROWS_AS(derive_reduced(broken([](ShipParams& p) {
                        p.m22 = 1;
                        p.m33 = 1;
                        p.m23 = 1;
                    })),
                    std::invalid_argument);
    CHECK_THROWS_AS(derive_reduced(broken([](ShipParams& p) { p.m11 = -1; })),
                    std::invalid_argument);
    CHECK_THROWS_AS(derive_reduced(broken([](ShipParams& p) { p.d22 = 0; })),
                    std::invalid_argument);
    CHECK_THROWS_AS(derive_reduced(broken([](ShipParams& p) {
                        p.d33 = std::numeric_limits<double>::quiet_NaN();
                    })),
                    std::invalid_argument);
}

TEST_CASE("derive_reduced: ratios reconstruct the raw entries") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> d(0.1, 50.0);
    for (int i = 0; i < 200; ++i) {
        ShipParams p;
        p.m11 = d(rng);
        p.m22 = d(rng);
        p.m33 = d(rng);
        p.m23 = 0.1 * d(rng);
        p.d11 = d(rng);
        p.d22 = d(rng);
        p.d33 = d(rng);
        p.d23 = -0.05 * d(rng);
        p.d32 = -0.05 * d(rng);
        if (p.m22 * p.m33 - p.m23 * p.m23 <= 0) continue;
        const ReducedParams rp = derive_reduced(p);
        CHECK(rp.a * p.m22 == doctest::Approx(p.m23).epsilon(1e-15));
        CHECK(rp.b * p.m22 == doctest::Approx(p.d23).epsilon(1e-15));
        CHECK(rp.c * p.m22 == doctest::Approx(p.m11).epsilon(1e-15));
        CHECK(rp.d * p.m22 == doctest::Approx(p.d22).epsilon(1e-15));
    }
}

TEST_CASE("kinematics_rhs") {
    PoseRates k = kinematics_rhs({0, 0, 0, 1, 0, 0});
    CHECK(k.x == 1.0);
    CHECK(k.y == 0.0);
    CHECK(k.psi == 0.0);

    k = kinematics_rhs({0, 0, std::numbers::pi / 2, 1, 0, 0});
    CHECK(std::abs(k.x) < 1e-12);
    CHECK(k.y == doctest::Approx(1.0).epsilon(1e-12));

    k = kinematics_rhs({0, 0, 0, 0, 1, 0.5});
    CHECK(k.x == 0.0);
    CHECK(k.y == 1.0);
    CHECK(k.psi == 0.5);
}

TEST_CASE("reduced_dynamics_rhs") {
    const ReducedParams rp = derive_reduced(ShipParams::defaults());

    VelRates a = reduced_dynamics_rhs(1, 0.5, 0.1, {0, 0}, rp);
    CHECK(a.u == 0.0);
    CHECK(a.r == 0.0);
    CHECK(a.v == doctest::Approx(-0.11832662721893491).epsilon(1e-12));

    a = reduced_dynamics_rhs(0, 0, 0, {0, 0}, rp);
    CHECK((a.u == 0 && a.v == 0 && a.r == 0));

    a = reduced_dynamics_rhs(0, 0, 0, {0, 1}, rp);
    CHECK(a.v == doctest::Approx(-0.02992603550295858).epsilon(1e-12));
    CHECK(a.r == 1.0);
}

TEST_CASE("input transformation: frozen spot values") {
    const ShipParams p = ShipParams::defaults();

    const ReducedInputs ri = input_to_reduced({0, 0, 0, 1, 0, 0}, {1, 0}, p);
    CHECK(ri.tau1 == doctest::Approx(0.0028798449612403101).epsilon(1e-12));
    CHECK(ri.tau2 == 0.0);

    const ReducedInputs zero = input_to_reduced({}, {0, 0}, p);
    CHECK(zero.tau1 == 0.0);
    CHECK(zero.tau2 == 0.0);

    const TrueInputs ti =
        input_from_reduced({0, 0, 0, 1, 0, 0}, {0.0028798449612403101, 0}, p);
    CHECK(ti.tau_u == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(ti.tau_r == 0.0);

    const TrueInputs tz = input_from_reduced({}, {0, 0}, p);
    CHECK(tz.tau_u == 0.0);
    CHECK(tz.tau_r == 0.0);
}

TEST_CASE("input transformation: mutual inverses on random samples") {
    const ShipParams p = ShipParams::defaults();
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> din(-100.0, 100.0);
    for (int i = 0; i < 1000; ++i) {
        const ShipState s = random_state(rng);
        const TrueInputs ti{din(rng), din(rng)};
        const TrueInputs ti2 = input_from_reduced(s, input_to_reduced(s, ti, p), p);
        CHECK(std::abs(ti2.tau_u - ti.tau_u) <=
              1e-9 * std::max(1.0, std::abs(ti.tau_u)));
        CHECK(std::abs(ti2.tau_r - ti.tau_r) <=
              1e-9 * std::max(1.0, std::abs(ti.tau_r)));

        const ReducedInputs ri{din(rng), din(rng)};
        const ReducedInputs ri2 = input_to_reduced(s, input_from_reduced(s, ri, p), p);
        CHECK(std::abs(ri2.tau1 - ri.tau1) <= 1e-9 * std::max(1.0, std::abs(ri.tau1)));
        CHECK(std::abs(ri2.tau2 - ri.tau2) <= 1e-9 * std::max(1.0, std::abs(ri.tau2)));
    }
}

TEST_CASE("full_dynamics_rhs: equilibrium and frozen sway/yaw response") {
    const ShipParams p = ShipParams::defaults();

    const VelRates zero = full_dynamics_rhs(0, 0, 0, {0, 0}, p);
    CHECK((zero.u == 0 && zero.v == 0 && zero.r == 0));

    // pure unit sway, no input: 2x2 solve against the second damping column
    const VelRates a = full_dynamics_rhs(0, 1, 0, {0, 0}, p);
    CHECK(a.u == 0.0);
    CHECK(a.v == doctest::Approx(-0.089329507005118966).epsilon(1e-12));
    CHECK(a.r == doctest::Approx(0.1269771001216224).epsilon(1e-12));
}

TEST_CASE("full dynamics agree with the reduced formulation") {
    const ShipParams p = ShipParams::defaults();
    const ReducedParams rp = derive_reduced(p);
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> din(-100.0, 100.0);
    for (int i = 0; i < 1000; ++i) {
        const ShipState s = random_state(rng);
        const TrueInputs ti{din(rng), din(rng)};
        const VelRates full = full_dynamics_rhs(s.u, s.v, s.r, ti, p);
        const VelRates red =
            reduced_dynamics_rhs(s.u, s.v, s.r, input_to_reduced(s, ti, p), rp);
        CHECK(std::abs(full.u - red.u) <= 1e-9 * std::max(1.0, std::abs(full.u)));
        CHECK(std::abs(full.v - red.v) <= 1e-9 * std::max(1.0, std::abs(full.v)));
        CHECK(std::abs(full.r - red.r) <= 1e-9 * std::max(1.0, std::abs(full.r)));
    }
}
