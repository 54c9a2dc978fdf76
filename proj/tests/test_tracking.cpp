#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "shipctl/sim.hpp"
#include "shipctl/smallangle.hpp"
#include "shipctl/tracking.hpp"

using namespace shipctl;

namespace {

const ShipParams kParams = ShipParams::defaults();
const ReducedParams kRp = derive_reduced(kParams);

}  // namespace

TEST_CASE("track_errors: rotation into the body frame") {
    const ShipState s{3, -1, 0.7, 1.2, 0.1, -0.3};
    const RawTrackErrors same = track_errors(s, s);
    CHECK((same.xe == 0 && same.ye == 0 && same.psie == 0 && same.ue == 0 &&
           same.ve == 0 && same.re == 0));

    const RawTrackErrors id = track_errors({2, 3, 0, 0, 0, 0}, {1, 1, 0, 0, 0, 0});
    CHECK(id.xe == 1.0);
    CHECK(id.ye == 2.0);

    const RawTrackErrors rot =
        track_errors({1, 0, std::numbers::pi / 2, 0, 0, 0}, {0, 0, 0, 0, 0, 0});
    CHECK(std::abs(rot.xe) < 1e-12);
    CHECK(rot.ye == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(rot.psie == doctest::Approx(std::numbers::pi / 2));
}

TEST_CASE("alpha_beta: zero, leading order, frozen value") {
    const AlphaBeta zero = alpha_beta(0.0, 4.0, -2.0);
    CHECK(zero.alpha == 0.0);
    CHECK(zero.beta == 0.0);

    const AlphaBeta ab = alpha_beta(1e-3, 4.0, 0.0);
    CHECK(ab.alpha == doctest::Approx(1.6666666111111121e-10).epsilon(1e-12));
    CHECK(ab.beta == doctest::Approx(-6.6666663333333413e-7).epsilon(1e-12));
}

TEST_CASE("alpha_beta: series and direct branches agree across the crossover") {
    const double pairs[][2] = {{4, 0}, {0.2, -0.32}, {1, 1}, {-3, 2}};
    for (int k = 0; k <= 40; ++k) {
        const double psie = 1e-6 * std::pow(10.0, 4.0 * k / 40.0);
        for (const auto& uv : pairs) {
            for (double sign : {1.0, -1.0}) {
                const AlphaBeta s = alpha_beta(sign * psie, uv[0], uv[1], 1.5e-2);
                const AlphaBeta d = alpha_beta(sign * psie, uv[0], uv[1], 0.0);
                CHECK(std::abs(s.alpha - d.alpha) <= 1e-9 * std::abs(d.alpha));
                CHECK(std::abs(s.beta - d.beta) <= 1e-9 * std::abs(d.beta));
            }
        }
    }
}

TEST_CASE("remainder kernels agree with naive long-double evaluation") {
    // the naive forms are well conditioned only for moderately large angles
    for (int k = 0; k <= 60; ++k) {
        const double x = 0.05 * std::pow(3.0 / 0.05, k / 60.0);
        const long double xl = x;
        const long double cr = std::cos(xl) - 1.0L + 0.5L * xl * xl;
        const long double sr = std::sin(xl) - xl;
        CHECK(smallangle::cos_rem(x) ==
              doctest::Approx(static_cast<double>(cr)).epsilon(1e-11));
        CHECK(smallangle::sin_rem(x) ==
              doctest::Approx(static_cast<double>(sr)).epsilon(1e-11));
    }
}

TEST_CASE("alpha_beta_rates: limits and finite differences") {
    const AlphaBetaRates zero = alpha_beta_rates(0.0, 1.0, 4.0, 0.5, -1.0, 0.2);
    CHECK(zero.alpha == 0.0);
    CHECK(zero.beta == 0.0);

    // frozen reference signals and no yaw-error rate: nothing moves
    const AlphaBetaRates still = alpha_beta_rates(0.8, 0.0, 4.0, 0.0, -1.0, 0.0);
    CHECK(still.alpha == 0.0);
    CHECK(still.beta == 0.0);

    auto traj = [](double t) {
        return std::array<double, 6>{0.3 * std::sin(t),          0.3 * std::cos(t),
                                     2.0 + std::cos(0.7 * t),    -0.7 * std::sin(0.7 * t),
                                     0.5 * std::sin(1.3 * t),    0.65 * std::cos(1.3 * t)};
    };
    const double h = 1e-4;
    double worst = 0;
    for (double t = 0; t <= 8.0; t += 0.02) {
        const auto q = traj(t), qp = traj(t + h), qm = traj(t - h);
        const AlphaBeta ap = alpha_beta(qp[0], qp[2], qp[4]);
        const AlphaBeta am = alpha_beta(qm[0], qm[2], qm[4]);
        const AlphaBetaRates an = alpha_beta_rates(q[0], q[1], q[2], q[3], q[4], q[5]);
        worst = std::max(worst, std::abs((ap.alpha - am.alpha) / (2 * h) - an.alpha));
        worst = std::max(worst, std::abs((ap.beta - am.beta) / (2 * h) - an.beta));
    }
    CHECK(worst < 1e-5);
}

TEST_CASE("to_track_coords: zero and single-term values") {
    const RefSignals ref = make_ref_signals({0, 0, 0, 1, 0, 0}, 0, 0, kRp);
    const TrackCoords zero = to_track_coords({}, ref, kRp);
    CHECK((zero.vbare == 0 && zero.ze == 0 && zero.ubare == 0));

    RawTrackErrors e{};
    e.psie = 1.0;
    const TrackCoords tc = to_track_coords(e, ref, kRp);
    CHECK(tc.vbare == doctest::Approx(0.75561834319526627).epsilon(1e-13));

    RawTrackErrors e2{};
    e2.xe = 1.0;
    const TrackCoords tc2 = to_track_coords(e2, ref, kRp);
    CHECK(tc2.ubare == doctest::Approx(0.085529585798816568).epsilon(1e-13));
}

TEST_CASE("track_error_rhs: exact tracking is invariant, single-term check") {
    for (const ShipState& rs : {ShipState{0, 0, 0.3, 4, 0, 0},
                                ShipState{-2, 1, 0, 0.2, -0.32, 0.188}}) {
        const RefSignals ref = make_ref_signals(rs, 0, 0, kRp);
        const TrackCoordsRate out =
            track_error_rhs(to_track_coords({}, ref, kRp), ref, 0, 0, kRp);
        CHECK((out.xe == 0 && out.vbare == 0 && out.ze == 0 && out.psie == 0 &&
               out.re == 0 && out.ubare == 0));
        CHECK((out.D3 == 0 && out.D4 == 0));
    }

    // psie=0, ubare=1, rd=0.188: zedot = -ubare (re + rd) = -0.188
    const RefSignals circ = make_ref_signals({0, 0, 0, 0.2, -0.32, 0.188}, 0, 0, kRp);
    TrackCoords tc{};
    tc.ubare = 1.0;
    const TrackCoordsRate out = track_error_rhs(tc, circ, 0, 0, kRp);
    CHECK(out.ze == doctest::Approx(-0.188).epsilon(1e-15));
}

TEST_CASE("track_error_rhs matches finite differences along a run") {
    Scenario sc = presets::track_circle();
    sc.step = 1e-4;
    sc.duration = 1.0;
    const TimeSeries ts = simulate(sc);
    double worst = 0;
    const double inv2h = 1.0 / (2.0 * sc.step);
    for (std::size_t i = 1; i + 1 < ts.size(); ++i) {
        const TrackCoords& cp = ts.track[i + 1].coords;
        const TrackCoords& cm = ts.track[i - 1].coords;
        const TrackRecord& rec = ts.track[i];
        const TrackCoordsRate an =
            track_error_rhs(rec.coords, ts.ref[i], rec.tau2e, rec.taubar1e, kRp);
        worst = std::max(worst, std::abs((cp.xe - cm.xe) * inv2h - an.xe));
        worst = std::max(worst, std::abs((cp.vbare - cm.vbare) * inv2h - an.vbare));
        worst = std::max(worst, std::abs((cp.ze - cm.ze) * inv2h - an.ze));
        worst = std::max(worst, std::abs((cp.psie - cm.psie) * inv2h - an.psie));
        worst = std::max(worst, std::abs((cp.re - cm.re) * inv2h - an.re));
        worst = std::max(worst, std::abs((cp.ubare - cm.ubare) * inv2h - an.ubare));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("virtual_yaw_command: zero and collapsed-formula values") {
    const TrackGains g;
    const RefSignals ref = make_ref_signals({0, 0, 0, 4, 0, 0}, 0, 0, kRp);
    TrackCoords zero{};
    CHECK(virtual_yaw_command(zero, ref, g, kRp).red == 0.0);

    TrackCoords tc{};
    tc.ze = 1.0;
    const YawCommand yc = virtual_yaw_command(tc, ref, g, kRp);
    CHECK(yc.red == doctest::Approx(-0.34211834319526627).epsilon(1e-13));
}

TEST_CASE("track_control: steady straight-line feedforward") {
    const TrackGains g;
    const ShipState ref_state{10, 5, std::numbers::pi / 8, 4, 0, 0};
    const RefSignals ref = make_ref_signals(ref_state, 0, 0, kRp);
    const TrueInputs ti = track_control(ref_state, ref, g, kParams, kRp);
    CHECK(ti.tau_u == doctest::Approx(3.7028).epsilon(1e-12));
    CHECK(std::abs(ti.tau_r) < 1e-9);
}

TEST_CASE("track_control composes consistently with the input transform") {
    const TrackGains g;
    const RefSignals ref = make_ref_signals({1, -2, 0.4, 0.2, -0.32, 0.188}, 0, 0, kRp);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> d(-3.0, 3.0);
    for (int i = 0; i < 500; ++i) {
        const ShipState s{d(rng), d(rng), d(rng), d(rng), d(rng), d(rng)};
        const TrackLawTerms lt = track_law_terms(s, ref, g, kParams, kRp);
        const ReducedInputs ri = input_to_reduced(s, lt.tau, kParams);
        const RawTrackErrors e = track_errors(s, ref.state);
        const double xedot = e.ue - ref.state.u * (std::cos(e.psie) - 1.0) -
                             ref.state.v * std::sin(e.psie) + s.r * e.ye;
        const double taubar1e = kRp.d * xedot + kRp.c * (ri.tau1 - ref.tau1d);
        CHECK(std::abs(taubar1e - lt.taubar1e) < 1e-10);
        CHECK(std::abs((ri.tau2 - ref.tau2d) - lt.tau2e) < 1e-10);
    }
}

TEST_CASE("storage function L3 decreases as predicted along a run") {
    Scenario sc = presets::track_line();
    sc.duration = 30.0;
    const MonitorReport rep = lyapunov_monitor(simulate(sc), sc, 1e-3);
    CHECK(rep.residual_ok);
    CHECK(rep.max_step_increase <= 1e-8);
    CHECK(rep.min_margin_cs >= -1e-12);
}

TEST_CASE("pe_check: excitation decisions and input validation") {
    std::vector<RefSignals> line(2001);
    for (auto& q : line) {
        q.state.u = 4.0;
        q.state.r = 0.0;
    }
    CHECK(pe_check(line, 0.01, 10.0).ok);

    std::vector<RefSignals> zero(2001);
    CHECK_FALSE(pe_check(zero, 0.01, 10.0).ok);

    std::vector<RefSignals> decaying(10001);
    for (std::size_t i = 0; i < decaying.size(); ++i) {
        const double t = 0.01 * static_cast<double>(i);
        decaying[i].state.u = std::exp(-t);
        decaying[i].udot_d = -std::exp(-t);
        decaying[i].uddot_d = std::exp(-t);
    }
    const PeReport rep = pe_check(decaying, 0.01, 10.0);
    CHECK_FALSE(rep.ok);
    CHECK(rep.tail_infimum < 1e-3);

    std::vector<RefSignals> brief(200);  // 2 s of data, 10 s window
    for (auto& q : brief) q.state.u = 1.0;
    CHECK_THROWS_AS(pe_check(brief, 0.01, 10.0), std::invalid_argument);

    // unbounded signal fails the cap even though the tail is excited
    std::vector<RefSignals> wild(2001);
    for (auto& q : wild) q.state.u = 1e7;
    CHECK_FALSE(pe_check(wild, 0.01, 10.0).ok);
}

TEST_CASE("cascade coefficient c4 decays along a converging run") {
    Scenario sc = presets::track_line();
    const TimeSeries ts = simulate(sc);
    double peak = 0;
    for (const TrackRecord& q : ts.track) peak = std::max(peak, q.c4t);
    CHECK(peak > 0);
    CHECK(ts.track.back().c4t < 1e-2 * peak);
}
