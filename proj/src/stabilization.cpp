#include "shipctl/stabilization.hpp"

#include <cmath>
#include <stdexcept>

namespace shipctl {

void StabGains::validate() const {
    if (!(k1 > 0 && k2 > 0 && k3 > 0 && k4 > 0))
        throw std::invalid_argument("stabilization gains k1..k4 must be > 0");
    if (!(dither_amp > 0 && dither_sharp > 0))
        throw std::invalid_argument("dither amplitude and sharpness must be > 0");
}

StabCoords to_stab_coords(const ShipState& s, const ReducedParams& rp) {
    const double cp = std::cos(s.psi);
    const double sp = std::sin(s.psi);
    const double xbar = s.x * cp + s.y * sp;
    const double ybar = -s.x * sp + s.y * cp;
    const double vbar = s.v + rp.a * s.r + rp.b * s.psi;
    return {xbar, ybar, vbar, rp.d * ybar + vbar, s.psi, rp.c * s.u + rp.d * xbar, s.r};
}

ShipState from_stab_coords(const StabCoords& sc, const ReducedParams& rp) {
    const double cp = std::cos(sc.psi);
    const double sp = std::sin(sc.psi);
    return {sc.xbar * cp - sc.ybar * sp,
            sc.xbar * sp + sc.ybar * cp,
            sc.psi,
            (sc.ubar - rp.d * sc.xbar) / rp.c,
            sc.vbar - rp.a * sc.r - rp.b * sc.psi,
            sc.r};
}

StabCoordsRate stab_coords_rhs(const StabCoords& sc, double taubar1, double tau2,
                               const ReducedParams& rp) {
    const double u = (sc.ubar - rp.d * sc.xbar) / rp.c;
    const double v = sc.vbar - rp.a * sc.r - rp.b * sc.psi;
    StabCoordsRate out;
    out.xbar = u + (sc.z - sc.vbar) / rp.d * sc.r;
    out.ybar = v - sc.r * sc.xbar;
    out.vbar = -(sc.ubar - rp.d * sc.xbar) * sc.r - rp.d * v;
    out.z = -sc.ubar * sc.r;
    out.psi = sc.r;
    out.ubar = taubar1;
    out.r = tau2;
    out.D1 = sc.ubar / rp.c + sc.z * sc.r / rp.d;
    out.D2 = -sc.ubar * sc.r + rp.d * (rp.a * sc.r + rp.b * sc.psi);
    return out;
}

StabCommand stab_control(double t, const StabCoords& sc, const StabGains& g) {
    const double fz = g.dither_amp * std::tanh(g.dither_sharp * sc.z * sc.z);
    return {g.k1 * sc.z * sc.r - g.k2 * sc.ubar,
            -g.k3 * sc.psi - g.k4 * sc.r + fz * std::cos(t)};
}

StabLawTerms stab_law_terms(double t, const ShipState& s, const StabGains& g,
                            const ShipParams& p, const ReducedParams& rp) {
    StabLawTerms out;
    out.coords = to_stab_coords(s, rp);
    const StabCommand cmd = stab_control(t, out.coords, g);
    out.taubar1 = cmd.taubar1;
    out.tau2 = cmd.tau2;
    out.tau1 = (cmd.taubar1 - rp.d * (out.coords.ubar - rp.d * out.coords.xbar) / rp.c -
                (out.coords.z - out.coords.vbar) * out.coords.r) /
               rp.c;
    out.tau = input_from_reduced(s, {out.tau1, out.tau2}, p);
    return out;
}

TrueInputs stab_closed_loop(double t, const ShipState& s, const StabGains& g,
                            const ShipParams& p, const ReducedParams& rp) {
    return stab_law_terms(t, s, g, p, rp).tau;
}

TrueInputs stab_closed_loop(double t, const ShipState& s, const StabGains& g,
                            const ShipParams& p) {
    return stab_closed_loop(t, s, g, p, derive_reduced(p));
}

}  // namespace shipctl
