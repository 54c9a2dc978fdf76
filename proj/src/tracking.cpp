#include "shipctl/tracking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "shipctl/smallangle.hpp"

namespace shipctl {

namespace {

// g(psi)/psi, h(psi)/psi and their psi-derivatives, series-branched below eps.
struct Ratios {
    double g = 0;
    double h = 0;
    double dg = 0;
    double dh = 0;
};

Ratios ratios(double psi, double eps) {
    if (psi == 0.0) return {};
    if (std::abs(psi) < eps) {
        const double p2 = psi * psi;
        Ratios r;
        r.g = psi * p2 * (1.0 / 24 + p2 * (-1.0 / 720 + p2 * (1.0 / 40320)));
        r.h = p2 * (-1.0 / 6 + p2 * (1.0 / 120 + p2 * (-1.0 / 5040)));
        r.dg = p2 * (1.0 / 8 + p2 * (-1.0 / 144 + p2 * (1.0 / 5760)));
        r.dh = psi * (-1.0 / 3 + p2 * (1.0 / 30 + p2 * (-1.0 / 840)));
        return r;
    }
    const double cr = smallangle::cos_rem(psi);
    const double sr = smallangle::sin_rem(psi);
    Ratios r;
    r.g = cr / psi;
    r.h = sr / psi;
    // d/dpsi of g/psi = (-h psi - g)/psi^2; of h/psi = (psi cos - sin)/psi^2
    // with psi cos psi - sin psi = psi g - psi^3/2 - h.
    r.dg = -(psi * sr + cr) / (psi * psi);
    r.dh = (psi * cr - 0.5 * psi * psi * psi - sr) / (psi * psi);
    return r;
}

}  // namespace

void TrackGains::validate() const {
    if (!(k1 > 0 && k2 > 0 && k3 > 0 && k4 > 0))
        throw std::invalid_argument("tracking gains k1..k4 must be > 0");
}

RefSignals make_ref_signals(const ShipState& ref_state, double tau1d, double tau2d,
                            const ReducedParams& rp) {
    RefSignals r;
    r.state = ref_state;
    r.tau1d = tau1d;
    r.tau2d = tau2d;
    r.udot_d = tau1d;
    r.uddot_d = 0.0;
    r.rdot_d = tau2d;
    r.vdot_d = -rp.a * tau2d - rp.b * ref_state.r - rp.c * ref_state.u * ref_state.r -
               rp.d * ref_state.v;
    return r;
}

AlphaBeta alpha_beta(double psie, double u_d, double v_d, double eps) {
    const Ratios r = ratios(psie, eps);
    return {u_d * r.g + v_d * r.h, -v_d * r.g + u_d * r.h};
}

AlphaBetaRates alpha_beta_rates(double psie, double re, double u_d, double udot_d,
                                double v_d, double vdot_d, double eps) {
    const Ratios r = ratios(psie, eps);
    return {(u_d * r.dg + v_d * r.dh) * re + r.g * udot_d + r.h * vdot_d,
            (-v_d * r.dg + u_d * r.dh) * re + r.h * udot_d - r.g * vdot_d};
}

RawTrackErrors track_errors(const ShipState& s, const ShipState& ref) {
    const double cp = std::cos(s.psi);
    const double sp = std::sin(s.psi);
    const double dx = s.x - ref.x;
    const double dy = s.y - ref.y;
    return {dx * cp + dy * sp, -dx * sp + dy * cp, s.psi - ref.psi,
            s.u - ref.u,       s.v - ref.v,        s.r - ref.r};
}

TrackCoords to_track_coords(const RawTrackErrors& e, const RefSignals& ref,
                            const ReducedParams& rp) {
    TrackCoords tc;
    tc.xe = e.xe;
    tc.ye = e.ye;
    tc.psie = e.psie;
    tc.ue = e.ue;
    tc.ve = e.ve;
    tc.re = e.re;
    tc.vbare = e.ve + rp.a * e.re + rp.b * e.psie + rp.c * ref.state.u * e.psie;
    tc.ze = rp.d * e.ye + tc.vbare;
    tc.ubare = rp.d * e.xe + rp.c * e.ue;
    return tc;
}

TrackCoordsRate track_error_rhs(const TrackCoords& tc, const RefSignals& ref,
                                double tau2e, double taubar1e,
                                const ReducedParams& rp) {
    const double u_d = ref.state.u;
    const double v_d = ref.state.v;
    const double r = tc.re + ref.state.r;  // actual yaw rate
    const auto [alpha, beta] = alpha_beta(tc.psie, u_d, v_d);
    const double phi = rp.d * beta + rp.c * ref.udot_d + 0.5 * rp.d * v_d * tc.psie +
                       rp.d * u_d;

    TrackCoordsRate out;
    out.D3 = tc.ubare / rp.c - alpha * tc.psie + 0.5 * u_d * tc.psie * tc.psie -
             v_d * tc.psie + tc.ze * r / rp.d;
    out.D4 = rp.d * (rp.a * tc.re + rp.b * tc.psie + rp.c * u_d * tc.psie) -
             tc.ubare * r + rp.c * ref.udot_d * tc.psie;
    out.xe = -(rp.d / rp.c) * tc.xe - tc.vbare * r / rp.d + out.D3;
    out.vbare = -rp.d * tc.vbare + rp.d * tc.xe * r + out.D4;
    out.ze = phi * tc.psie - tc.ubare * r;
    out.psie = tc.re;
    out.re = tau2e;
    out.ubare = taubar1e;
    return out;
}

YawCommand virtual_yaw_command(const TrackCoords& tc, const RefSignals& ref,
                               const TrackGains& g, const ReducedParams& rp) {
    const double u_d = ref.state.u;
    const double v_d = ref.state.v;
    const double r = tc.re + ref.state.r;
    const double beta = alpha_beta(tc.psie, u_d, v_d).beta;
    const double beta_dot =
        alpha_beta_rates(tc.psie, tc.re, u_d, ref.udot_d, v_d, ref.vdot_d).beta;

    const double phi = rp.d * beta + rp.c * ref.udot_d + 0.5 * rp.d * v_d * tc.psie +
                       rp.d * u_d;
    const double phi_dot = rp.d * beta_dot + rp.c * ref.uddot_d +
                           0.5 * rp.d * (ref.vdot_d * tc.psie + v_d * tc.re) +
                           rp.d * ref.udot_d;
    const double ze_dot = phi * tc.psie - tc.ubare * r;
    return {-g.k1 * tc.ze * phi - g.k2 * tc.psie,
            -g.k1 * (ze_dot * phi + tc.ze * phi_dot) - g.k2 * tc.re};
}

TrackLawTerms track_law_terms(const ShipState& s, const RefSignals& ref,
                              const TrackGains& g, const ShipParams& p,
                              const ReducedParams& rp) {
    TrackLawTerms out;
    const RawTrackErrors e = track_errors(s, ref.state);
    out.coords = to_track_coords(e, ref, rp);
    const auto [alpha, beta] = alpha_beta(e.psie, ref.state.u, ref.state.v);
    out.alpha = alpha;
    out.beta = beta;
    const YawCommand yc = virtual_yaw_command(out.coords, ref, g, rp);
    out.red = yc.red;
    out.red_dot = yc.red_dot;
    out.taubar1e = g.k1 * out.coords.ze * s.r - g.k3 * out.coords.ubare;
    out.tau2e = yc.red_dot - e.psie - g.k4 * (e.re - yc.red);
    // taubar1e = d xedot + c tau1e with the untransformed xe rate
    const double xedot = e.ue - ref.state.u * (std::cos(e.psie) - 1.0) -
                         ref.state.v * std::sin(e.psie) + s.r * e.ye;
    out.tau1e = (out.taubar1e - rp.d * xedot) / rp.c;
    out.tau_reduced = {out.tau1e + ref.tau1d, out.tau2e + ref.tau2d};
    out.tau = input_from_reduced(s, out.tau_reduced, p);
    return out;
}

TrueInputs track_control(const ShipState& s, const RefSignals& ref,
                         const TrackGains& g, const ShipParams& p,
                         const ReducedParams& rp) {
    return track_law_terms(s, ref, g, p, rp).tau;
}

TrueInputs track_control(const ShipState& s, const RefSignals& ref,
                         const TrackGains& g, const ShipParams& p) {
    return track_control(s, ref, g, p, derive_reduced(p));
}

PeReport pe_check(std::span<const RefSignals> series, double step, double window,
                  double threshold, double bound_cap) {
    if (series.size() < 2 || step <= 0)
        throw std::invalid_argument("pe_check: need at least two samples and step > 0");
    const double span_s = static_cast<double>(series.size() - 1) * step;
    if (span_s < window)
        throw std::invalid_argument("pe_check: series shorter than the tail window");

    PeReport rep;
    const std::size_t tail_count =
        static_cast<std::size_t>(std::floor(window / step)) + 1;
    const std::size_t tail_begin = series.size() - tail_count;
    rep.tail_samples = tail_count;

    double inf = std::numeric_limits<double>::infinity();
    for (std::size_t i = tail_begin; i < series.size(); ++i) {
        const double m = std::abs(series[i].state.u) + std::abs(series[i].state.r);
        if (m < inf) inf = m;
    }
    rep.tail_infimum = inf;

    bool bounded = true;
    for (const RefSignals& q : series) {
        rep.max_ud = std::max(rep.max_ud, std::abs(q.state.u));
        rep.max_udot = std::max(rep.max_udot, std::abs(q.udot_d));
        rep.max_uddot = std::max(rep.max_uddot, std::abs(q.uddot_d));
        rep.max_rd = std::max(rep.max_rd, std::abs(q.state.r));
        rep.max_rdot = std::max(rep.max_rdot, std::abs(q.rdot_d));
    }
    for (double m : {rep.max_ud, rep.max_udot, rep.max_uddot, rep.max_rd, rep.max_rdot})
        if (!std::isfinite(m) || m >= bound_cap) bounded = false;

    rep.ok = bounded && inf >= threshold;
    return rep;
}

}  // namespace shipctl
