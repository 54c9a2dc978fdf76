#pragma once

#include "shipctl/model.hpp"

namespace shipctl {

// Transformed state for point stabilization:
//   xbar =  x cos psi + y sin psi        ybar = -x sin psi + y cos psi
//   vbar =  v + a r + b psi              z    = d ybar + vbar
//   ubar =  c u + d xbar
// ybar is carried redundantly so the inverse map is exact.
struct StabCoords {
    double xbar;
    double ybar;
    double vbar;
    double z;
    double psi;
    double ubar;
    double r;
};

// Rates of the transformed state, plus the cascade perturbation terms
//   D1 = ubar/c + z r / d,  D2 = -ubar r + d (a r + b psi)
struct StabCoordsRate {
    double xbar;
    double ybar;
    double vbar;
    double z;
    double psi;
    double ubar;
    double r;
    double D1;
    double D2;
};

// Gains of the time-varying stabilizing law
//   taubar1 = k1 z r - k2 ubar
//   tau2    = -k3 psi - k4 r + f(z) cos(t),  f(z) = A tanh(s z^2)
struct StabGains {
    double k1 = 0.6;
    double k2 = 0.4;
    double k3 = 0.1;
    double k4 = 0.1;
    double dither_amp = 10.0;    // A
    double dither_sharp = 10.0;  // s

    void validate() const;  // all six strictly positive

    bool operator==(const StabGains&) const = default;
};

struct StabCommand {
    double taubar1;
    double tau2;
};

// Everything the law computes on the way to actuator forces; kept for
// logging and for the composition tests.
struct StabLawTerms {
    StabCoords coords;
    double taubar1;
    double tau2;
    double tau1;
    TrueInputs tau;
};

StabCoords to_stab_coords(const ShipState& s, const ReducedParams& rp);

// Exact inverse; to_stab_coords(from_stab_coords(sc)) == sc up to rounding.
ShipState from_stab_coords(const StabCoords& sc, const ReducedParams& rp);

StabCoordsRate stab_coords_rhs(const StabCoords& sc, double taubar1, double tau2,
                               const ReducedParams& rp);

StabCommand stab_control(double t, const StabCoords& sc, const StabGains& g);

// Full composition: transform, control, invert the taubar1 definition
// (tau1 = (taubar1 - d(ubar - d xbar)/c - (z - vbar) r) / c), map to forces.
StabLawTerms stab_law_terms(double t, const ShipState& s, const StabGains& g,
                            const ShipParams& p, const ReducedParams& rp);

TrueInputs stab_closed_loop(double t, const ShipState& s, const StabGains& g,
                            const ShipParams& p, const ReducedParams& rp);
TrueInputs stab_closed_loop(double t, const ShipState& s, const StabGains& g,
                            const ShipParams& p);

}  // namespace shipctl
