#include "shipctl/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace shipctl {

namespace {

constexpr double kNormFloor = 1e-12;

std::array<double, 6> pack(const ShipState& s) {
    return {s.x, s.y, s.psi, s.u, s.v, s.r};
}

ShipState unpack(const std::array<double, 6>& y) {
    return {y[0], y[1], y[2], y[3], y[4], y[5]};
}

void check_finite(const ShipState& s, double t) {
    for (double q : {s.x, s.y, s.psi, s.u, s.v, s.r})
        if (!std::isfinite(q))
            throw SimError("simulation diverged: non-finite state at t = " +
                           std::to_string(t));
}

std::array<double, 6> ship_rates(const ShipState& s, const TrueInputs& in,
                                 const ShipParams& p) {
    const PoseRates k = kinematics_rhs(s);
    const VelRates a = full_dynamics_rhs(s.u, s.v, s.r, in, p);
    return {k.x, k.y, k.psi, a.u, a.v, a.r};
}

std::array<double, 6> ref_rates(const ShipState& s, double tau1d, double tau2d,
                                const ReducedParams& rp) {
    const PoseRates k = kinematics_rhs(s);
    const VelRates a = reduced_dynamics_rhs(s.u, s.v, s.r, {tau1d, tau2d}, rp);
    return {k.x, k.y, k.psi, a.u, a.v, a.r};
}

double err_norm2(const TrackCoords& tc) {
    return std::sqrt(tc.xe * tc.xe + tc.vbare * tc.vbare + tc.ze * tc.ze +
                     tc.psie * tc.psie + tc.ubare * tc.ubare + tc.re * tc.re);
}

StabRecord make_stab_record(double t, const ShipState& s, const Scenario& sc,
                            const ReducedParams& rp, ReducedInputs& tau_red,
                            TrueInputs& tau) {
    const StabLawTerms lt = stab_law_terms(t, s, sc.stab_gains, sc.params, rp);
    tau_red = {lt.tau1, lt.tau2};
    tau = lt.tau;
    StabRecord rec;
    rec.coords = lt.coords;
    rec.taubar1 = lt.taubar1;
    const StabCoordsRate rate = stab_coords_rhs(lt.coords, lt.taubar1, lt.tau2, rp);
    rec.D1 = rate.D1;
    rec.D2 = rate.D2;
    rec.L1 = 0.5 * (rp.d * rp.d * lt.coords.xbar * lt.coords.xbar +
                    lt.coords.vbar * lt.coords.vbar);
    rec.L2 = 0.5 * (sc.stab_gains.k1 * lt.coords.z * lt.coords.z +
                    lt.coords.ubar * lt.coords.ubar);
    rec.c2t = std::max(rp.d * rp.d * std::abs(rate.D1), std::abs(rate.D2)) /
              std::sqrt(0.5 * std::max(rp.d * rp.d, 1.0));
    return rec;
}

TrackRecord make_track_record(const ShipState& s, const RefSignals& ref,
                              const Scenario& sc, const ReducedParams& rp,
                              ReducedInputs& tau_red, TrueInputs& tau) {
    const TrackLawTerms lt = track_law_terms(s, ref, sc.track_gains, sc.params, rp);
    tau_red = lt.tau_reduced;
    tau = lt.tau;
    TrackRecord rec;
    rec.coords = lt.coords;
    rec.alpha = lt.alpha;
    rec.beta = lt.beta;
    rec.red = lt.red;
    rec.red_dot = lt.red_dot;
    rec.taubar1e = lt.taubar1e;
    rec.tau2e = lt.tau2e;
    const TrackCoordsRate rate =
        track_error_rhs(lt.coords, ref, lt.tau2e, lt.taubar1e, rp);
    rec.D3 = rate.D3;
    rec.D4 = rate.D4;
    rec.L_cascade = 0.5 * (rp.d * rp.d * lt.coords.xe * lt.coords.xe +
                           lt.coords.vbare * lt.coords.vbare);
    const double rslack = lt.coords.re - lt.red;
    rec.L3 = 0.5 * (sc.track_gains.k1 * lt.coords.ze * lt.coords.ze +
                    lt.coords.psie * lt.coords.psie + rslack * rslack +
                    lt.coords.ubare * lt.coords.ubare);
    // L4: same storage with the linearized yaw command
    const double phi_lin = rp.c * ref.udot_d + rp.d * ref.state.u;
    const double red_lin =
        -sc.track_gains.k1 * lt.coords.ze * phi_lin - sc.track_gains.k2 * lt.coords.psie;
    const double rslack_lin = lt.coords.re - red_lin;
    rec.L4 = 0.5 * (sc.track_gains.k1 * lt.coords.ze * lt.coords.ze +
                    lt.coords.psie * lt.coords.psie + rslack_lin * rslack_lin +
                    lt.coords.ubare * lt.coords.ubare);
    rec.c4t = std::max(rp.d * rp.d * std::abs(rate.D3), std::abs(rate.D4)) /
              std::sqrt(0.5 * std::max(rp.d * rp.d, 1.0));
    rec.err_norm = err_norm2(lt.coords);
    return rec;
}

}  // namespace

const char* to_string(Mode m) {
    switch (m) {
        case Mode::stabilize: return "stabilize";
        case Mode::track: return "track";
        case Mode::reference: return "reference";
    }
    return "?";
}

double Scenario::horizon() const {
    if (duration >= 0) return duration;
    return mode == Mode::stabilize ? 300.0 : 100.0;
}

void Scenario::validate() const {
    params.validate();
    if (mode == Mode::stabilize) stab_gains.validate();
    if (mode == Mode::track) track_gains.validate();
    if (!(step > 0)) throw std::invalid_argument("step must be > 0");
    if (!(horizon() >= step)) throw std::invalid_argument("duration must be >= step");
    if (!(pe_window > 0) || !(pe_threshold > 0))
        throw std::invalid_argument("pe_window and pe_threshold must be > 0");
    for (double q : {init.x, init.y, init.psi, init.u, init.v, init.r,
                     ref_init.x, ref_init.y, ref_init.psi, ref_init.u, ref_init.v,
                     ref_init.r, tau1d, tau2d})
        if (!std::isfinite(q)) throw std::invalid_argument("non-finite scenario value");
}

TimeSeries reference_generate(const ShipState& init, double tau1d, double tau2d,
                              const ShipParams& params, const ReducedParams& rp,
                              double step, double duration) {
    if (!(step > 0) || !(duration >= step))
        throw std::invalid_argument("reference_generate: bad grid");
    const std::size_t n = static_cast<std::size_t>(std::llround(duration / step));
    TimeSeries ts;
    ts.mode = Mode::reference;
    ts.step = step;
    ts.t.reserve(n + 1);
    ts.state.reserve(n + 1);
    ts.ref.reserve(n + 1);
    ts.tau.reserve(n + 1);
    ts.tau_reduced.reserve(n + 1);

    auto rhs = [&](double, const std::array<double, 6>& y) {
        return ref_rates(unpack(y), tau1d, tau2d, rp);
    };

    std::array<double, 6> y = pack(init);
    for (std::size_t i = 0; i <= n; ++i) {
        const double t = static_cast<double>(i) * step;
        const ShipState s = unpack(y);
        check_finite(s, t);
        ts.t.push_back(t);
        ts.state.push_back(s);
        ts.ref.push_back(make_ref_signals(s, tau1d, tau2d, rp));
        ts.tau_reduced.push_back({tau1d, tau2d});
        ts.tau.push_back(input_from_reduced(s, {tau1d, tau2d}, params));
        if (i < n) y = rk4_step(rhs, t, y, step);
    }
    return ts;
}

TimeSeries simulate(const Scenario& sc) {
    sc.validate();
    const ReducedParams rp = derive_reduced(sc.params);
    const double h = sc.step;
    const std::size_t n = static_cast<std::size_t>(std::llround(sc.horizon() / h));

    if (sc.mode == Mode::reference)
        return reference_generate(sc.ref_init, sc.tau1d, sc.tau2d, sc.params, rp, h,
                                  sc.horizon());

    TimeSeries ts;
    ts.mode = sc.mode;
    ts.step = h;
    ts.t.reserve(n + 1);
    ts.state.reserve(n + 1);
    ts.tau.reserve(n + 1);
    ts.tau_reduced.reserve(n + 1);

    if (sc.mode == Mode::stabilize) {
        ts.stab.reserve(n + 1);
        auto rhs = [&](double t, const std::array<double, 6>& y) {
            const ShipState s = unpack(y);
            const TrueInputs in = stab_closed_loop(t, s, sc.stab_gains, sc.params, rp);
            return ship_rates(s, in, sc.params);
        };
        std::array<double, 6> y = pack(sc.init);
        for (std::size_t i = 0; i <= n; ++i) {
            const double t = static_cast<double>(i) * h;
            const ShipState s = unpack(y);
            check_finite(s, t);
            ReducedInputs tr;
            TrueInputs tu;
            ts.stab.push_back(make_stab_record(t, s, sc, rp, tr, tu));
            ts.t.push_back(t);
            ts.state.push_back(s);
            ts.tau_reduced.push_back(tr);
            ts.tau.push_back(tu);
            if (i < n) y = rk4_step(rhs, t, y, h);
        }
        return ts;
    }

    // track: ship and reference co-integrated in the same stage evaluations
    ts.ref.reserve(n + 1);
    ts.track.reserve(n + 1);
    auto rhs = [&](double, const std::array<double, 12>& y) {
        const ShipState s = unpack({y[0], y[1], y[2], y[3], y[4], y[5]});
        const ShipState rs = unpack({y[6], y[7], y[8], y[9], y[10], y[11]});
        const RefSignals ref = make_ref_signals(rs, sc.tau1d, sc.tau2d, rp);
        const TrueInputs in = track_control(s, ref, sc.track_gains, sc.params, rp);
        const std::array<double, 6> ds = ship_rates(s, in, sc.params);
        const std::array<double, 6> dr = ref_rates(rs, sc.tau1d, sc.tau2d, rp);
        return std::array<double, 12>{ds[0], ds[1], ds[2], ds[3], ds[4], ds[5],
                                      dr[0], dr[1], dr[2], dr[3], dr[4], dr[5]};
    };
    std::array<double, 12> y = {sc.init.x,     sc.init.y,     sc.init.psi,
                                sc.init.u,     sc.init.v,     sc.init.r,
                                sc.ref_init.x, sc.ref_init.y, sc.ref_init.psi,
                                sc.ref_init.u, sc.ref_init.v, sc.ref_init.r};
    for (std::size_t i = 0; i <= n; ++i) {
        const double t = static_cast<double>(i) * h;
        const ShipState s = unpack({y[0], y[1], y[2], y[3], y[4], y[5]});
        const ShipState rs = unpack({y[6], y[7], y[8], y[9], y[10], y[11]});
        check_finite(s, t);
        check_finite(rs, t);
        const RefSignals ref = make_ref_signals(rs, sc.tau1d, sc.tau2d, rp);
        ReducedInputs tr;
        TrueInputs tu;
        ts.track.push_back(make_track_record(s, ref, sc, rp, tr, tu));
        ts.t.push_back(t);
        ts.state.push_back(s);
        ts.ref.push_back(ref);
        ts.tau_reduced.push_back(tr);
        ts.tau.push_back(tu);
        if (i < n) y = rk4_step(rhs, t, y, h);
    }
    ts.pe = pe_check(ts.ref, h, std::min(sc.pe_window, sc.horizon()), sc.pe_threshold);
    return ts;
}

MonitorReport lyapunov_monitor(const TimeSeries& ts, const Scenario& sc,
                               double residual_tol, double increase_tol) {
    if (ts.mode != sc.mode)
        throw std::invalid_argument("lyapunov_monitor: series/scenario mode mismatch");
    if (ts.mode == Mode::reference)
        throw std::invalid_argument("lyapunov_monitor: reference series has no monitor");
    const ReducedParams rp = derive_reduced(sc.params);
    const std::size_t n = ts.size();
    const double nan = std::numeric_limits<double>::quiet_NaN();

    MonitorReport rep;
    rep.mode = ts.mode;
    rep.c1 = 2.0 * std::min(rp.d * rp.d * rp.d / rp.c, rp.d) /
             std::max(rp.d * rp.d, 1.0);
    rep.L_lyap.resize(n);
    rep.L_cascade.resize(n);
    rep.W.resize(n);
    rep.dLlyap_fd.assign(n, nan);
    rep.dLlyap_pred.resize(n);
    rep.dLcas_fd.assign(n, nan);
    rep.dLcas_pred.resize(n);
    rep.c_coeff.resize(n);
    if (ts.mode == Mode::track) rep.L4.resize(n);

    double min_margin_logged = std::numeric_limits<double>::infinity();
    double min_margin_cs = std::numeric_limits<double>::infinity();

    for (std::size_t i = 0; i < n; ++i) {
        double Di, Dj, xi, vi;  // cascade cross-term pieces: d^2 Di xi + Dj vi
        if (ts.mode == Mode::stabilize) {
            const StabRecord& q = ts.stab[i];
            rep.L_lyap[i] = q.L2;
            rep.L_cascade[i] = q.L1;
            rep.dLlyap_pred[i] =
                -sc.stab_gains.k2 * q.coords.ubar * q.coords.ubar;
            rep.c_coeff[i] = q.c2t;
            Di = q.D1;
            Dj = q.D2;
            xi = q.coords.xbar;
            vi = q.coords.vbar;
        } else {
            const TrackRecord& q = ts.track[i];
            rep.L_lyap[i] = q.L3;
            rep.L_cascade[i] = q.L_cascade;
            rep.L4[i] = q.L4;
            const double rslack = q.coords.re - q.red;
            rep.dLlyap_pred[i] = -sc.track_gains.k2 * q.coords.psie * q.coords.psie -
                               sc.track_gains.k3 * q.coords.ubare * q.coords.ubare -
                               sc.track_gains.k4 * rslack * rslack;
            rep.c_coeff[i] = q.c4t;
            Di = q.D3;
            Dj = q.D4;
            xi = q.coords.xe;
            vi = q.coords.vbare;
        }
        const double L = rep.L_cascade[i];
        rep.W[i] = std::sqrt(L);
        rep.dLcas_pred[i] = -(rp.d * rp.d * rp.d / rp.c) * xi * xi -
                            rp.d * vi * vi + rp.d * rp.d * Di * xi + Dj * vi;
        const double sqL = rep.W[i];
        const double bound_logged = -rep.c1 * L + rep.c_coeff[i] * sqL;
        const double c_cs =
            std::sqrt(2.0 * (rp.d * rp.d * Di * Di + Dj * Dj));
        const double bound_cs = -rep.c1 * L + c_cs * sqL;
        min_margin_logged = std::min(min_margin_logged, bound_logged - rep.dLcas_pred[i]);
        min_margin_cs = std::min(min_margin_cs, bound_cs - rep.dLcas_pred[i]);
    }

    const double h = ts.step;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        rep.dLlyap_fd[i] = (rep.L_lyap[i + 1] - rep.L_lyap[i - 1]) / (2.0 * h);
        rep.dLcas_fd[i] = (rep.L_cascade[i + 1] - rep.L_cascade[i - 1]) / (2.0 * h);
        rep.max_lyap_residual = std::max(
            rep.max_lyap_residual, std::abs(rep.dLlyap_fd[i] - rep.dLlyap_pred[i]));
        rep.max_cascade_residual = std::max(
            rep.max_cascade_residual, std::abs(rep.dLcas_fd[i] - rep.dLcas_pred[i]));
    }
    for (std::size_t i = 0; i + 1 < n; ++i)
        rep.max_step_increase =
            std::max(rep.max_step_increase, rep.L_lyap[i + 1] - rep.L_lyap[i]);

    rep.min_margin_logged = min_margin_logged;
    rep.min_margin_cs = min_margin_cs;
    rep.decrease_ok = rep.max_step_increase <= increase_tol;
    rep.residual_ok = rep.max_lyap_residual <= residual_tol;
    return rep;
}

LinTrackState linearized_track_rhs(const LinTrackState& e, const RefSignals& ref,
                                   const TrackGains& g, const ReducedParams& rp) {
    const double phi = rp.c * ref.udot_d + rp.d * ref.state.u;
    const double phi_dot = rp.c * ref.uddot_d + rp.d * ref.udot_d;
    const double rd = ref.state.r;
    const double ze_dot = phi * e.psie - e.ubare * rd;
    const double red = -g.k1 * e.ze * phi - g.k2 * e.psie;
    const double red_dot = -g.k1 * (ze_dot * phi + e.ze * phi_dot) - g.k2 * e.re;
    const double tau2e = red_dot - e.psie - g.k4 * (e.re - red);
    const double taubar1e = g.k1 * e.ze * rd - g.k3 * e.ubare;
    return {ze_dot, e.re, tau2e, taubar1e};
}

RateFit exp_rate_fit(std::span<const double> t, std::span<const double> norm,
                     double window_fraction) {
    if (t.size() != norm.size() || t.empty())
        throw std::invalid_argument("exp_rate_fit: empty or mismatched series");
    if (!(window_fraction > 0) || window_fraction > 1)
        throw std::invalid_argument("exp_rate_fit: window fraction must be in (0, 1]");
    const double t0 = t.back() - window_fraction * (t.back() - t.front());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < t0 || norm[i] < kNormFloor) continue;
        const double li = std::log(norm[i]);
        sx += t[i];
        sy += li;
        sxx += t[i] * t[i];
        sxy += t[i] * li;
        ++m;
    }
    if (m < 2) throw std::invalid_argument("exp_rate_fit: window has fewer than 2 usable samples");
    const double det = static_cast<double>(m) * sxx - sx * sx;
    if (det == 0) throw std::invalid_argument("exp_rate_fit: degenerate time window");
    const double slope = (static_cast<double>(m) * sxy - sx * sy) / det;
    const double inter = (sy - slope * sx) / static_cast<double>(m);
    double ss = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < t0 || norm[i] < kNormFloor) continue;
        const double d = std::log(norm[i]) - slope * t[i] - inter;
        ss += d * d;
    }
    return {-slope, std::sqrt(ss / static_cast<double>(m)), m};
}

RateFit exp_rate_fit(const TimeSeries& ts, double window_fraction) {
    std::vector<double> norm(ts.size());
    if (ts.mode == Mode::track) {
        for (std::size_t i = 0; i < ts.size(); ++i) norm[i] = ts.track[i].err_norm;
    } else if (ts.mode == Mode::stabilize) {
        for (std::size_t i = 0; i < ts.size(); ++i) {
            const ShipState& s = ts.state[i];
            norm[i] = std::sqrt(s.x * s.x + s.y * s.y + s.psi * s.psi + s.u * s.u +
                                s.v * s.v + s.r * s.r);
        }
    } else {
        throw std::invalid_argument("exp_rate_fit: reference series has no error norm");
    }
    return exp_rate_fit(ts.t, norm, window_fraction);
}

namespace presets {

Scenario stabilize_offset() {
    Scenario sc;
    sc.mode = Mode::stabilize;
    sc.init = {-2.0, 2.0, 0, 0, 0, 0};
    sc.duration = 300.0;
    return sc;
}

Scenario stabilize_lateral() {
    Scenario sc;
    sc.mode = Mode::stabilize;
    sc.init = {0.0, 2.0, 0, 0, 0, 0};
    sc.duration = 300.0;
    return sc;
}

Scenario track_line() {
    Scenario sc;
    sc.mode = Mode::track;
    sc.init = {0.0, 40.0, 0, 0, 0, 0};
    sc.ref_init = {0.0, 0.0, std::numbers::pi / 8, 4.0, 0.0, 0.0};
    sc.duration = 120.0;
    return sc;
}

Scenario track_circle() {
    Scenario sc;
    sc.mode = Mode::track;
    sc.init = {};
    sc.ref_init = {-2.0, 1.0, 0.0, 0.2, -0.32, 0.188};
    sc.duration = 100.0;
    return sc;
}

}  // namespace presets

}  // namespace shipctl
