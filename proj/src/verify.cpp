#include "shipctl/verify.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <vector>

#include "shipctl/config.hpp"
#include "shipctl/csv.hpp"
#include "shipctl/model.hpp"
#include "shipctl/sim.hpp"
#include "shipctl/stabilization.hpp"
#include "shipctl/svg.hpp"
#include "shipctl/tracking.hpp"

namespace shipctl::verify {

namespace {

namespace fs = std::filesystem;
using clock_t_ = std::chrono::steady_clock;

double seconds_since(clock_t_::time_point t0) {
    return std::chrono::duration<double>(clock_t_::now() - t0).count();
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

// mixed absolute/relative deviation: |a-b| / max(1, |a|, |b|)
double mixed_err(double a, double b) {
    return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

int spawn(const std::string& cmd) {
    const int st = std::system(cmd.c_str());
    if (st == -1) return -1;
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

// minimal XML well-formedness scan: balanced matching tags, legal entities
bool xml_well_formed(const std::string& doc) {
    std::vector<std::string> stack;
    std::size_t i = 0;
    const std::size_t n = doc.size();
    while (i < n) {
        const char c = doc[i];
        if (c == '<') {
            if (i + 1 < n && doc[i + 1] == '?') {  // declaration
                const auto e = doc.find("?>", i);
                if (e == std::string::npos) return false;
                i = e + 2;
                continue;
            }
            const auto e = doc.find('>', i);
            if (e == std::string::npos) return false;
            std::string tag = doc.substr(i + 1, e - i - 1);
            const bool closing = !tag.empty() && tag[0] == '/';
            const bool self_closing = !tag.empty() && tag.back() == '/';
            if (closing) tag = tag.substr(1);
            if (self_closing) tag.pop_back();
            const std::string name = tag.substr(0, tag.find_first_of(" \t\n"));
            if (name.empty()) return false;
            if (closing) {
                if (stack.empty() || stack.back() != name) return false;
                stack.pop_back();
            } else if (!self_closing) {
                stack.push_back(name);
            }
            i = e + 1;
        } else if (c == '&') {
            bool ok = false;
            for (const char* ent : {"&amp;", "&lt;", "&gt;", "&quot;", "&apos;"})
                if (doc.compare(i, std::string(ent).size(), ent) == 0) ok = true;
            if (!ok) return false;
            ++i;
        } else if (c == '>') {
            return false;
        } else {
            ++i;
        }
    }
    return stack.empty();
}

struct Suite {
    std::ostream& log;
    std::vector<CheckResult> results;

    void add(const std::string& name, bool pass, const std::string& detail) {
        results.push_back({name, pass, detail});
        log << (pass ? "[PASS] " : "[FAIL] ") << name << " — " << detail << "\n";
    }
};

// forces the closed-loop state a signed step away from a sample; used for
// off-grid central differences along a recorded run
template <std::size_t N, class Rhs>
std::array<double, N> nudge(Rhs&& rhs, double t, const std::array<double, N>& y,
                            double delta) {
    return rk4_step(rhs, t, y, delta);
}

void check_bijectivity(Suite& s) {
    const auto t0 = clock_t_::now();
    const ShipParams p = ShipParams::defaults();
    std::mt19937_64 rng(20260810);
    std::uniform_real_distribution<double> ds(-10.0, 10.0);
    std::uniform_real_distribution<double> di(-100.0, 100.0);
    double worst = 0;
    for (int i = 0; i < 10000; ++i) {
        ShipState st{ds(rng), ds(rng), ds(rng), ds(rng), ds(rng), ds(rng)};
        const TrueInputs ti{di(rng), di(rng)};
        const TrueInputs ti2 = input_from_reduced(st, input_to_reduced(st, ti, p), p);
        worst = std::max(worst, mixed_err(ti.tau_u, ti2.tau_u));
        worst = std::max(worst, mixed_err(ti.tau_r, ti2.tau_r));
        const ReducedInputs ri{di(rng), di(rng)};
        const ReducedInputs ri2 = input_to_reduced(st, input_from_reduced(st, ri, p), p);
        worst = std::max(worst, mixed_err(ri.tau1, ri2.tau1));
        worst = std::max(worst, mixed_err(ri.tau2, ri2.tau2));
    }
    const double dt = seconds_since(t0);
    s.add("01 input-transform bijectivity",
          worst <= 1e-9 && dt < 1.0,
          "max deviation " + fmt(worst) + " (tol 1e-9) over 10000 samples in " +
              fmt(dt) + " s");
}

void check_model_equivalence(Suite& s) {
    const ShipParams p = ShipParams::defaults();
    const ReducedParams rp = derive_reduced(p);
    std::mt19937_64 rng(20260811);
    std::uniform_real_distribution<double> ds(-10.0, 10.0);
    std::uniform_real_distribution<double> di(-100.0, 100.0);
    double worst = 0;
    for (int i = 0; i < 10000; ++i) {
        ShipState st{ds(rng), ds(rng), ds(rng), ds(rng), ds(rng), ds(rng)};
        const TrueInputs ti{di(rng), di(rng)};
        const VelRates full = full_dynamics_rhs(st.u, st.v, st.r, ti, p);
        const VelRates red =
            reduced_dynamics_rhs(st.u, st.v, st.r, input_to_reduced(st, ti, p), rp);
        worst = std::max({worst, mixed_err(full.u, red.u), mixed_err(full.v, red.v),
                          mixed_err(full.r, red.r)});
    }
    s.add("02 model equivalence (coupled vs reduced)", worst <= 1e-9,
          "max deviation " + fmt(worst) + " (tol 1e-9) over 10000 samples");
}

// max |central difference of the coord map - analytic coord rates| along a
// stabilize run, differencing with spacing delta via off-grid substeps
double stab_fd_residual(const TimeSeries& ts, const Scenario& sc, double delta) {
    const ReducedParams rp = derive_reduced(sc.params);
    auto rhs = [&](double t, const std::array<double, 6>& y) {
        const ShipState st{y[0], y[1], y[2], y[3], y[4], y[5]};
        const TrueInputs in = stab_closed_loop(t, st, sc.stab_gains, sc.params, rp);
        const PoseRates k = kinematics_rhs(st);
        const VelRates a = full_dynamics_rhs(st.u, st.v, st.r, in, sc.params);
        return std::array<double, 6>{k.x, k.y, k.psi, a.u, a.v, a.r};
    };
    auto coords_of = [&](const std::array<double, 6>& y) {
        return to_stab_coords({y[0], y[1], y[2], y[3], y[4], y[5]}, rp);
    };
    double worst = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double t = ts.t[i];
        const ShipState& st = ts.state[i];
        const std::array<double, 6> y{st.x, st.y, st.psi, st.u, st.v, st.r};
        const StabCoords cp = coords_of(nudge(rhs, t, y, delta));
        const StabCoords cm = coords_of(nudge(rhs, t, y, -delta));
        const StabRecord& rec = ts.stab[i];
        const StabCoordsRate an =
            stab_coords_rhs(rec.coords, rec.taubar1, ts.tau_reduced[i].tau2, rp);
        const double inv2d = 1.0 / (2.0 * delta);
        const double res[] = {(cp.xbar - cm.xbar) * inv2d - an.xbar,
                              (cp.ybar - cm.ybar) * inv2d - an.ybar,
                              (cp.vbar - cm.vbar) * inv2d - an.vbar,
                              (cp.z - cm.z) * inv2d - an.z,
                              (cp.psi - cm.psi) * inv2d - an.psi,
                              (cp.ubar - cm.ubar) * inv2d - an.ubar,
                              (cp.r - cm.r) * inv2d - an.r};
        for (double q : res) worst = std::max(worst, std::abs(q));
    }
    return worst;
}

void check_transform_consistency(Suite& s) {
    const Scenario sc = presets::stabilize_offset();
    const TimeSeries ts = simulate(sc);
    const double r1 = stab_fd_residual(ts, sc, 1e-3);
    const double r2 = stab_fd_residual(ts, sc, 5e-4);
    const double ratio = r1 / r2;
    const bool pass = r1 <= 1e-4 && ratio > 3.0 && ratio < 5.0;
    s.add("03 transform-dynamics consistency",
          pass,
          "max residual " + fmt(r1) + " at delta 1e-3 (tol 1e-4), shrink x" +
              fmt(ratio) + " when delta halves (expect ~4)");
}

void check_stab_lyapunov(Suite& s) {
    bool pass = true;
    std::string detail;
    for (const Scenario& base :
         {presets::stabilize_offset(), presets::stabilize_lateral()}) {
        Scenario a = base;
        a.step = 0.01;
        Scenario b = base;
        b.step = 0.005;
        const MonitorReport ma = lyapunov_monitor(simulate(a), a, 1.0);
        const MonitorReport mb = lyapunov_monitor(simulate(b), b, 1.0);
        const double ratio = ma.max_lyap_residual / mb.max_lyap_residual;
        const bool ok = ratio > 3.0 && ratio < 5.0 && ma.max_step_increase <= 1e-8 &&
                        mb.max_step_increase <= 1e-8;
        pass = pass && ok;
        if (!detail.empty()) detail += "; ";
        detail += "residual " + fmt(ma.max_lyap_residual) + " -> " +
                  fmt(mb.max_lyap_residual) + " (x" + fmt(ratio) +
                  "), max step increase " + fmt(ma.max_step_increase);
    }
    s.add("04 stabilization Lyapunov identity O(h^2), L2 non-increasing", pass, detail);
}

void check_stab_convergence(Suite& s) {
    const auto t0 = clock_t_::now();
    bool pass = true;
    std::string detail;
    for (const Scenario& sc :
         {presets::stabilize_offset(), presets::stabilize_lateral()}) {
        const TimeSeries ts = simulate(sc);
        const ShipState& f = ts.state.back();
        const double nf = std::max({std::abs(f.x), std::abs(f.y), std::abs(f.psi),
                                    std::abs(f.u), std::abs(f.v), std::abs(f.r)});
        const double n0 =
            std::max({std::abs(sc.init.x), std::abs(sc.init.y), std::abs(sc.init.psi),
                      std::abs(sc.init.u), std::abs(sc.init.v), std::abs(sc.init.r)});
        pass = pass && nf < 0.1 * n0;
        if (!detail.empty()) detail += "; ";
        detail += "final sup-norm " + fmt(nf) + " vs bound " + fmt(0.1 * n0);
    }
    const double dt = seconds_since(t0);
    pass = pass && dt < 5.0;
    s.add("05 stabilization convergence (300 s horizon)", pass,
          detail + "; runtime " + fmt(dt) + " s");
}

void check_track_lyapunov(Suite& s) {
    bool pass = true;
    std::string detail;
    for (const Scenario& base : {presets::track_line(), presets::track_circle()}) {
        Scenario a = base;
        a.step = 0.01;
        Scenario b = base;
        b.step = 0.005;
        const MonitorReport ma = lyapunov_monitor(simulate(a), a, 1.0);
        const MonitorReport mb = lyapunov_monitor(simulate(b), b, 1.0);
        const double ratio = ma.max_lyap_residual / mb.max_lyap_residual;
        const bool ok = ratio > 3.0 && ratio < 5.0 && ma.max_step_increase <= 1e-8;
        pass = pass && ok;
        if (!detail.empty()) detail += "; ";
        detail += "residual " + fmt(ma.max_lyap_residual) + " -> " +
                  fmt(mb.max_lyap_residual) + " (x" + fmt(ratio) + ")";
    }
    s.add("06 tracking Lyapunov identity O(h^2)", pass, detail);
}

void check_red_dot(Suite& s) {
    Scenario sc = presets::track_line();
    sc.step = 1e-3;
    const TimeSeries ts = simulate(sc);
    double worst = 0, scale = 0;
    for (std::size_t i = 0; i < ts.size(); ++i)
        scale = std::max(scale, std::abs(ts.track[i].red_dot));
    for (std::size_t i = 1; i + 1 < ts.size(); ++i) {
        const double fd =
            (ts.track[i + 1].red - ts.track[i - 1].red) / (2.0 * sc.step);
        worst = std::max(worst, std::abs(fd - ts.track[i].red_dot));
    }
    const double rel = worst / scale;
    s.add("07 analytic red_dot vs finite difference", rel <= 1e-4,
          "max deviation " + fmt(worst) + " / max |red_dot| " + fmt(scale) +
              " = " + fmt(rel) + " (tol 1e-4)");
}

void check_track_convergence(Suite& s) {
    bool pass = true;
    std::string detail;
    for (const Scenario& sc : {presets::track_line(), presets::track_circle()}) {
        const auto t0 = clock_t_::now();
        const TimeSeries ts = simulate(sc);
        const double n0 = ts.track.front().err_norm;
        const double nf = ts.track.back().err_norm;
        const RateFit fit = exp_rate_fit(ts);
        const double dt = seconds_since(t0);
        const bool ok =
            nf < 1e-3 * n0 && fit.gamma > 0 && fit.rms_residual < 0.5 && dt < 5.0;
        pass = pass && ok;
        if (!detail.empty()) detail += "; ";
        detail += "error " + fmt(n0) + " -> " + fmt(nf) + ", gamma " + fmt(fit.gamma) +
                  ", rms " + fmt(fit.rms_residual) + ", " + fmt(dt) + " s";
    }
    s.add("08 tracking convergence + exponential rate", pass, detail);
}

void check_circle_equilibrium(Suite& s) {
    const ShipParams p = ShipParams::defaults();
    const ReducedParams rp = derive_reduced(p);
    const double ud = 0.2, rd = 0.188;
    const double vd = -(rp.b + rp.c * ud) * rd / rp.d;
    const TimeSeries ts =
        reference_generate({-2.0, 1.0, 0.0, ud, vd, rd}, 0, 0, p, rp, 0.01, 100.0);
    double drift = 0;
    for (const RefSignals& q : ts.ref)
        drift = std::max({drift, std::abs(q.state.u - ud), std::abs(q.state.v - vd),
                          std::abs(q.state.r - rd)});
    const bool two_dec = std::abs(vd - (-0.32)) < 0.005;
    s.add("09 circular reference equilibrium", drift < 1e-9 && two_dec,
          "velocity drift " + fmt(drift) + " over 100 s (tol 1e-9); v_d " + fmt(vd) +
              " rounds to -0.32");
}

void check_feedforward_invariance(Suite& s) {
    Scenario sc = presets::track_line();
    sc.init = sc.ref_init;
    sc.duration = 50.0;
    const TimeSeries ts = simulate(sc);
    double worst = 0;
    for (const TrackRecord& q : ts.track) worst = std::max(worst, q.err_norm);
    s.add("10 feedforward invariance from zero error", worst < 1e-8,
          "max error norm " + fmt(worst) + " over 50 s (tol 1e-8)");
}

void check_alpha_beta(Suite& s) {
    double worst_branch = 0;
    const double pairs[][2] = {{4, 0}, {0.2, -0.32}, {1, 1}, {-3, 2}};
    for (int k = 0; k <= 40; ++k) {
        const double psie = 1e-6 * std::pow(10.0, 4.0 * k / 40.0);  // 1e-6 .. 1e-2
        for (const auto& uv : pairs) {
            for (double sign : {1.0, -1.0}) {
                const AlphaBeta series = alpha_beta(sign * psie, uv[0], uv[1], 1e-2 * 1.01);
                const AlphaBeta direct = alpha_beta(sign * psie, uv[0], uv[1], 0.0);
                worst_branch = std::max(
                    worst_branch,
                    std::abs(series.alpha - direct.alpha) /
                        std::max(std::abs(direct.alpha), 1e-300));
                worst_branch = std::max(
                    worst_branch,
                    std::abs(series.beta - direct.beta) /
                        std::max(std::abs(direct.beta), 1e-300));
            }
        }
    }
    // rates vs central finite differences along a smooth synthetic trajectory
    auto traj = [](double t) {
        const double psie = 0.3 * std::sin(t);
        const double re = 0.3 * std::cos(t);
        const double ud = 2.0 + std::cos(0.7 * t);
        const double udo = -0.7 * std::sin(0.7 * t);
        const double vd = 0.5 * std::sin(1.3 * t);
        const double vdo = 0.65 * std::cos(1.3 * t);
        return std::array<double, 6>{psie, re, ud, udo, vd, vdo};
    };
    const double hfd = 1e-4;
    double worst_rate = 0;
    for (double t = 0; t <= 8.0; t += 0.01) {
        const auto q = traj(t);
        const auto qp = traj(t + hfd);
        const auto qm = traj(t - hfd);
        const AlphaBeta ap = alpha_beta(qp[0], qp[2], qp[4]);
        const AlphaBeta am = alpha_beta(qm[0], qm[2], qm[4]);
        const AlphaBetaRates an = alpha_beta_rates(q[0], q[1], q[2], q[3], q[4], q[5]);
        worst_rate = std::max(
            worst_rate, std::abs((ap.alpha - am.alpha) / (2 * hfd) - an.alpha));
        worst_rate =
            std::max(worst_rate, std::abs((ap.beta - am.beta) / (2 * hfd) - an.beta));
    }
    s.add("11 alpha/beta singularity handling",
          worst_branch <= 1e-9 && worst_rate <= 1e-5,
          "branch agreement " + fmt(worst_branch) + " (tol 1e-9), rates vs FD " +
              fmt(worst_rate) + " (tol 1e-5)");
}

void check_pe(Suite& s) {
    const ShipParams p = ShipParams::defaults();
    const ReducedParams rp = derive_reduced(p);
    const TimeSeries line = reference_generate({0, 0, std::atan(1.0), 4, 0, 0}, 0, 0,
                                               p, rp, 0.01, 100.0);
    const PeReport a = pe_check(line.ref, line.step);

    std::vector<RefSignals> zero(10001);
    const PeReport b = pe_check(zero, 0.01);

    std::vector<RefSignals> decaying(10001);
    for (std::size_t i = 0; i < decaying.size(); ++i) {
        const double t = 0.01 * static_cast<double>(i);
        decaying[i].state.u = std::exp(-t);
        decaying[i].udot_d = -std::exp(-t);
        decaying[i].uddot_d = std::exp(-t);
    }
    const PeReport c = pe_check(decaying, 0.01);

    s.add("12 persistent-excitation checker", a.ok && !b.ok && !c.ok,
          "line -> " + std::string(a.ok ? "true" : "false") + " (inf " +
              fmt(a.tail_infimum) + "), zero -> " + (b.ok ? "true" : "false") +
              ", exp(-t) -> " + (c.ok ? "true" : "false") + " (inf " +
              fmt(c.tail_infimum) + ")");
}

void check_integrator_order(Suite& s) {
    auto rhs = [](double, const std::array<double, 1>& y) {
        return std::array<double, 1>{y[0]};
    };
    auto integrate = [&](double h) {
        std::array<double, 1> y{1.0};
        const int n = static_cast<int>(std::llround(1.0 / h));
        for (int i = 0; i < n; ++i) y = rk4_step(rhs, i * h, y, h);
        return std::abs(y[0] - std::exp(1.0));
    };
    const double e1 = integrate(0.01);
    const double e2 = integrate(0.005);
    const double ratio = e1 / e2;
    s.add("13 integrator order",
          e1 < 1e-9 && ratio > 13.0 && ratio < 19.0,
          "global error " + fmt(e1) + " at h=0.01 (tol 1e-9), ratio x" + fmt(ratio) +
              " when h halves (expect ~16)");
}

void check_linearization(Suite& s) {
    const ShipParams p = ShipParams::defaults();
    const ReducedParams rp = derive_reduced(p);
    const TrackGains g;
    double worst = 0;
    const ShipState refs[] = {{0, 0, std::atan(1.0), 4.0, 0.0, 0.0},
                              {-2, 1, 0, 0.2, -0.32, 0.188}};
    for (const ShipState& rs : refs) {
        const RefSignals ref = make_ref_signals(rs, 0, 0, rp);
        // raw errors scaled so the transformed state has norm ~1e-6
        const double e = 1e-6 / 2.0;
        RawTrackErrors raw{};
        raw.psie = -e;
        raw.re = e;
        raw.ue = e / rp.c;  // ubare = c ue = e (xe = 0)
        raw.ve = -rp.a * raw.re - rp.b * raw.psie - rp.c * rs.u * raw.psie;  // vbare = 0
        raw.ye = e / rp.d;  // ze = d ye = e
        const TrackCoords tc = to_track_coords(raw, ref, rp);
        const YawCommand yc = virtual_yaw_command(tc, ref, g, rp);
        const double taubar1e = g.k1 * tc.ze * (tc.re + rs.r) - g.k3 * tc.ubare;
        const double tau2e = yc.red_dot - tc.psie - g.k4 * (tc.re - yc.red);
        const TrackCoordsRate nl = track_error_rhs(tc, ref, tau2e, taubar1e, rp);
        const LinTrackState lin =
            linearized_track_rhs({tc.ze, tc.psie, tc.re, tc.ubare}, ref, g, rp);
        worst = std::max({worst, std::abs(nl.ze - lin.ze),
                          std::abs(nl.psie - lin.psie), std::abs(nl.re - lin.re),
                          std::abs(nl.ubare - lin.ubare)});
    }
    s.add("14 linearized error model consistency", worst <= 1e-10,
          "max |nonlinear - linear| " + fmt(worst) + " at error norm 1e-6 (tol 1e-10)");
}

void check_cli_contract(Suite& s, const std::string& cli_path) {
    bool pass = true;
    std::string detail;

    // header contract
    pass = pass &&
           csv_header(Mode::stabilize) ==
               "t,x,y,psi,u,v,r,tau_u,tau_r,tau1,tau2,xbar,ybar,vbar,z,ubar,L1,L2,D1,D2";
    pass = pass &&
           csv_header(Mode::track) ==
               "t,x,y,psi,u,v,r,tau_u,tau_r,tau1,tau2,xe,ye,psie,ue,ve,re,vbare,ze,"
               "ubare,red,L3,err_norm";
    detail += std::string("headers ") + (pass ? "exact" : "WRONG");

    // CSV round-trip: every emitted cell parses back to the identical double
    Scenario sc = presets::stabilize_offset();
    sc.duration = 1.0;
    const TimeSeries ts = simulate(sc);
    std::ostringstream csv;
    write_csv(ts, csv);
    const std::string body = csv.str();
    bool rt_ok = true;
    {
        std::istringstream is(body);
        std::string lineq;
        std::getline(is, lineq);  // header
        std::size_t row = 0;
        while (std::getline(is, lineq) && rt_ok) {
            std::size_t col = 0, start = 0;
            while (start <= lineq.size()) {
                const auto comma = lineq.find(',', start);
                const std::string cell = lineq.substr(
                    start, comma == std::string::npos ? lineq.size() - start
                                                      : comma - start);
                double parsed = 0;
                std::from_chars(cell.data(), cell.data() + cell.size(), parsed);
                double ref = 0;
                const ShipState& st = ts.state[row];
                const StabRecord& rec = ts.stab[row];
                const double cells[] = {ts.t[row], st.x, st.y, st.psi, st.u, st.v,
                                        st.r, ts.tau[row].tau_u, ts.tau[row].tau_r,
                                        ts.tau_reduced[row].tau1,
                                        ts.tau_reduced[row].tau2, rec.coords.xbar,
                                        rec.coords.ybar, rec.coords.vbar,
                                        rec.coords.z, rec.coords.ubar, rec.L1,
                                        rec.L2, rec.D1, rec.D2};
                ref = cells[col];
                if (parsed != ref) {
                    rt_ok = false;
                    break;
                }
                ++col;
                if (comma == std::string::npos) break;
                start = comma + 1;
            }
            ++row;
        }
        rt_ok = rt_ok && row == ts.size();
    }
    pass = pass && rt_ok;
    detail += std::string(", csv round-trip ") + (rt_ok ? "bit-exact" : "LOSSY");

    // SVG determinism + well-formedness
    std::vector<PlotSeries> series(2);
    series[0].label = "a<&>";
    series[1].label = "b";
    for (int i = 0; i <= 10; ++i) {
        series[0].x.push_back(i * 0.1);
        series[0].y.push_back(std::sin(i * 0.1));
        series[1].x.push_back(i * 0.1);
        series[1].y.push_back(std::cos(i * 0.1));
    }
    const std::string svg1 = render_svg(series, {"t", "x", "y"});
    const std::string svg2 = render_svg(series, {"t", "x", "y"});
    const bool svg_ok = svg1 == svg2 && xml_well_formed(svg1);
    pass = pass && svg_ok;
    detail += std::string(", svg ") +
              (svg_ok ? "deterministic + well-formed" : "BROKEN");

    if (!cli_path.empty()) {
        const fs::path tmp =
            fs::temp_directory_path() /
            ("shipctl_verify_" + std::to_string(static_cast<long>(getpid())));
        fs::create_directories(tmp);
        const std::string q = "'" + cli_path + "'";
        const int rc_bad = spawn(q + " definitely-not-a-command >/dev/null 2>&1");
        const int rc_noconfig = spawn(q + " stabilize >/dev/null 2>&1");
        Scenario quick = presets::stabilize_offset();
        quick.duration = 2.0;
        std::ofstream(tmp / "case.cfg") << dump_config(quick);
        const std::string run = q + " stabilize --config '" + (tmp / "case.cfg").string() +
                                "' --out '" + (tmp / "out.csv").string() + "' --svg '" +
                                (tmp / "out.svg").string() + "' >/dev/null 2>&1";
        const int rc_run = spawn(run);
        const std::string run2 = q + " stabilize --config '" + (tmp / "case.cfg").string() +
                                 "' --svg '" + (tmp / "out2.svg").string() +
                                 "' >/dev/null 2>&1";
        const int rc_run2 = spawn(run2);
        std::string head;
        std::ifstream fin(tmp / "out.csv");
        std::getline(fin, head);
        auto slurp = [](const fs::path& p2) {
            std::ifstream f(p2, std::ios::binary);
            std::ostringstream os;
            os << f.rdbuf();
            return os.str();
        };
        const std::string sva = slurp(tmp / "out.svg");
        const std::string svb = slurp(tmp / "out2.svg");
        const bool cli_ok = rc_bad == 2 && rc_noconfig == 2 && rc_run == 0 &&
                            rc_run2 == 0 && head == csv_header(Mode::stabilize) &&
                            !sva.empty() && sva == svb && xml_well_formed(sva);
        pass = pass && cli_ok;
        detail += ", cli exit codes " +
                  std::string(rc_bad == 2 && rc_noconfig == 2 ? "2/2" : "WRONG") +
                  ", run " + std::to_string(rc_run) + ", artifacts " +
                  (cli_ok ? "ok" : "BAD");
        std::error_code ec;
        fs::remove_all(tmp, ec);
    }

    s.add("15 CLI and file-format contract", pass, detail);
}

}  // namespace

std::vector<CheckResult> run_all(std::ostream& log, const std::string& cli_path) {
    Suite s{log, {}};
    check_bijectivity(s);
    check_model_equivalence(s);
    check_transform_consistency(s);
    check_stab_lyapunov(s);
    check_stab_convergence(s);
    check_track_lyapunov(s);
    check_red_dot(s);
    check_track_convergence(s);
    check_circle_equilibrium(s);
    check_feedforward_invariance(s);
    check_alpha_beta(s);
    check_pe(s);
    check_integrator_order(s);
    check_linearization(s);
    check_cli_contract(s, cli_path);

    const int nf = failures(s.results);
    log << (nf == 0 ? "all checks passed"
                    : std::to_string(nf) + " check(s) FAILED")
        << " (" << s.results.size() << " total)\n";
    return s.results;
}

int failures(const std::vector<CheckResult>& results) {
    int n = 0;
    for (const CheckResult& r : results)
        if (!r.pass) ++n;
    return n;
}

}  // namespace shipctl::verify
