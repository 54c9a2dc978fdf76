#pragma once

#include <cstddef>
#include <span>

#include "shipctl/model.hpp"

namespace shipctl {

// Raw tracking errors, with the position error rotated into the ship body
// frame (angle psi, not psi_d) and psie left unwrapped.
struct RawTrackErrors {
    double xe;
    double ye;
    double psie;
    double ue;
    double ve;
    double re;
};

// Raw errors plus the transformed error state:
//   vbare = ve + a re + b psie + c u_d psie
//   ze    = d ye + vbare
//   ubare = d xe + c ue
struct TrackCoords {
    double xe;
    double ye;
    double psie;
    double ue;
    double ve;
    double re;
    double vbare;
    double ze;
    double ubare;
};

struct TrackGains {
    double k1 = 1.0;
    double k2 = 0.5;
    double k3 = 0.5;
    double k4 = 1.0;

    void validate() const;  // all strictly positive

    bool operator==(const TrackGains&) const = default;
};

// Reference trajectory sample: the reference ship state plus the signal
// derivatives the tracking law consumes. vdot_d always satisfies the
// reference sway dynamics -a tau2d - b r_d - c u_d r_d - d v_d.
struct RefSignals {
    ShipState state;
    double tau1d = 0;
    double tau2d = 0;
    double udot_d = 0;   // = tau1d
    double uddot_d = 0;  // second surge derivative (0 for constant tau1d)
    double rdot_d = 0;   // = tau2d
    double vdot_d = 0;
};

RefSignals make_ref_signals(const ShipState& ref_state, double tau1d, double tau2d,
                            const ReducedParams& rp);

// Couplings of the error dynamics. With g(x) = cos x - 1 + x^2/2 and
// h(x) = sin x - x:
//   alpha = (u_d g(psie) + v_d h(psie)) / psie
//   beta  = (-v_d g(psie) + u_d h(psie)) / psie
// Both extend continuously to 0 at psie = 0. Below |psie| < eps the
// ratios are evaluated by their series (leading terms psie^3/24 for g/psie,
// -psie^2/6 for h/psie); the direct branch uses the stable remainder
// kernels, so both branches agree to ~1e-14 everywhere.
struct AlphaBeta {
    double alpha;
    double beta;
};

// Total time derivatives along psie_dot = re and the given reference rates.
struct AlphaBetaRates {
    double alpha;
    double beta;
};

inline constexpr double kAlphaBetaSeriesEps = 1e-4;

AlphaBeta alpha_beta(double psie, double u_d, double v_d,
                     double eps = kAlphaBetaSeriesEps);
AlphaBetaRates alpha_beta_rates(double psie, double re, double u_d, double udot_d,
                                double v_d, double vdot_d,
                                double eps = kAlphaBetaSeriesEps);

RawTrackErrors track_errors(const ShipState& state, const ShipState& ref);

TrackCoords to_track_coords(const RawTrackErrors& e, const RefSignals& ref,
                            const ReducedParams& rp);

// Rates of (xe, vbare, ze, psie, re, ubare) under given error inputs, plus
// the cascade perturbations
//   D3 = ubare/c - alpha psie + 0.5 u_d psie^2 - v_d psie + ze(re+r_d)/d
//   D4 = d(a re + b psie + c u_d psie) - ubare(re+r_d) + c udot_d psie
struct TrackCoordsRate {
    double xe;
    double vbare;
    double ze;
    double psie;
    double re;
    double ubare;
    double D3;
    double D4;
};

TrackCoordsRate track_error_rhs(const TrackCoords& tc, const RefSignals& ref,
                                double tau2e, double taubar1e,
                                const ReducedParams& rp);

// Virtual yaw-rate command red = -k1 ze Phi - k2 psie with
// Phi = d beta + c udot_d + 0.5 d v_d psie + d u_d, and its analytic total
// derivative (the control path never differentiates numerically).
struct YawCommand {
    double red;
    double red_dot;
};

YawCommand virtual_yaw_command(const TrackCoords& tc, const RefSignals& ref,
                               const TrackGains& g, const ReducedParams& rp);

// Intermediate values of the tracking law, kept for logging and the
// composition tests.
struct TrackLawTerms {
    TrackCoords coords;
    double alpha;
    double beta;
    double red;
    double red_dot;
    double taubar1e;
    double tau2e;
    double tau1e;
    ReducedInputs tau_reduced;  // feedforward included
    TrueInputs tau;
};

TrackLawTerms track_law_terms(const ShipState& state, const RefSignals& ref,
                              const TrackGains& g, const ShipParams& p,
                              const ReducedParams& rp);

TrueInputs track_control(const ShipState& state, const RefSignals& ref,
                         const TrackGains& g, const ShipParams& p,
                         const ReducedParams& rp);
TrueInputs track_control(const ShipState& state, const RefSignals& ref,
                         const TrackGains& g, const ShipParams& p);

// Persistent-excitation check over a sampled reference: the tail-window
// infimum of |u_d| + |r_d| must reach the threshold and the signal maxima
// must stay below the boundedness cap.
struct PeReport {
    bool ok = false;
    double tail_infimum = 0;
    double max_ud = 0;
    double max_udot = 0;
    double max_uddot = 0;
    double max_rd = 0;
    double max_rdot = 0;
    std::size_t tail_samples = 0;
};

// Throws std::invalid_argument if the series spans less than `window`
// seconds. `step` is the sample spacing.
PeReport pe_check(std::span<const RefSignals> series, double step,
                  double window = 10.0, double threshold = 1e-3,
                  double bound_cap = 1e6);

}  // namespace shipctl
