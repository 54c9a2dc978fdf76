#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "shipctl/model.hpp"
#include "shipctl/stabilization.hpp"
#include "shipctl/tracking.hpp"

namespace shipctl {

enum class Mode { stabilize, track, reference };

const char* to_string(Mode m);

struct SimError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Classical fixed-step RK4. Throws SimError naming the stage (1..4) if any
// stage derivative is non-finite.
template <std::size_t N, class Rhs>
std::array<double, N> rk4_step(Rhs&& rhs, double t, const std::array<double, N>& y,
                               double h) {
    auto check = [](const std::array<double, N>& k, int stage) {
        for (double q : k)
            if (!std::isfinite(q))
                throw SimError("rk4_step: non-finite derivative at stage " +
                               std::to_string(stage));
    };
    std::array<double, N> k1 = rhs(t, y);
    check(k1, 1);
    std::array<double, N> s;
    for (std::size_t i = 0; i < N; ++i) s[i] = y[i] + 0.5 * h * k1[i];
    std::array<double, N> k2 = rhs(t + 0.5 * h, s);
    check(k2, 2);
    for (std::size_t i = 0; i < N; ++i) s[i] = y[i] + 0.5 * h * k2[i];
    std::array<double, N> k3 = rhs(t + 0.5 * h, s);
    check(k3, 3);
    for (std::size_t i = 0; i < N; ++i) s[i] = y[i] + h * k3[i];
    std::array<double, N> k4 = rhs(t + h, s);
    check(k4, 4);
    std::array<double, N> out;
    for (std::size_t i = 0; i < N; ++i)
        out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

// One simulation case: which controller, the vessel, the gains, the initial
// states, the reference inputs, and the grid.
struct Scenario {
    Mode mode = Mode::stabilize;
    ShipParams params;
    StabGains stab_gains;
    TrackGains track_gains;
    ShipState init;      // ship initial state (stabilize, track)
    ShipState ref_init;  // reference initial state (track, reference)
    double tau1d = 0;
    double tau2d = 0;
    double step = 0.01;     // s
    double duration = -1;   // s; < 0 selects the mode default
    double pe_window = 10;  // s
    double pe_threshold = 1e-3;

    double horizon() const;  // duration, or 300 s (stabilize) / 100 s (track, reference)
    void validate() const;

    bool operator==(const Scenario&) const = default;
};

// Per-sample stabilize-mode record: transformed coords, the law's values,
// the cascade perturbations and the monitored storage functions
//   L1 = 0.5 (d^2 xbar^2 + vbar^2),  L2 = 0.5 (k1 z^2 + ubar^2)
struct StabRecord {
    StabCoords coords;
    double taubar1;
    double D1;
    double D2;
    double L1;
    double L2;
    double c2t;  // max(d^2|D1|, |D2|) / sqrt(0.5 max(d^2, 1))
};

// Per-sample track-mode record. L_cascade = 0.5 (d^2 xe^2 + vbare^2),
// L3 = 0.5 (k1 ze^2 + psie^2 + (re-red)^2 + ubare^2), and L4 is the same
// storage function evaluated with the linearized yaw command. err_norm is
// the 2-norm of (xe, vbare, ze, psie, ubare, re).
struct TrackRecord {
    TrackCoords coords;
    double alpha;
    double beta;
    double red;
    double red_dot;
    double taubar1e;
    double tau2e;
    double D3;
    double D4;
    double L_cascade;
    double L3;
    double L4;
    double c4t;
    double err_norm;
};

// Uniform-grid run output. state/tau/tau_reduced are always filled; stab or
// ref/track depending on mode (reference mode fills state with the reference
// ship itself).
struct TimeSeries {
    Mode mode = Mode::stabilize;
    double step = 0;
    std::vector<double> t;
    std::vector<ShipState> state;
    std::vector<TrueInputs> tau;
    std::vector<ReducedInputs> tau_reduced;
    std::vector<StabRecord> stab;
    std::vector<RefSignals> ref;
    std::vector<TrackRecord> track;
    std::optional<PeReport> pe;

    std::size_t size() const { return t.size(); }
};

// Integrates the reference model only; attaches the signal derivatives at
// every sample. Aborts with SimError (time-stamped) on divergence.
TimeSeries reference_generate(const ShipState& init, double tau1d, double tau2d,
                              const ShipParams& params, const ReducedParams& rp,
                              double step, double duration);

// Closed-loop run. The controller is evaluated inside every RK4 stage (no
// sample-and-hold); in track mode the reference is co-integrated in the same
// stage evaluations. Non-finite states abort with a time-stamped SimError.
// In track mode, ts.pe reports the reference's excitation check.
TimeSeries simulate(const Scenario& sc);

// Per-sample Lyapunov/cascade report. *_fd are central differences on the
// sample grid (NaN at the ends), *_pred the analytic derivative expressions.
// The Lyapunov residual is |fd - pred| for L2 (stabilize) or L3 (track); the
// cascade margin is bound - lhs, reported both for the logged c2/c4
// coefficients and for the Cauchy-Schwarz form sqrt(2(d^2 Di^2 + Dj^2)),
// which bounds the cross term exactly.
struct MonitorReport {
    Mode mode = Mode::stabilize;
    double c1 = 0;  // 2 min(d^3/c, d) / max(d^2, 1); same for both cascades
    std::vector<double> L_lyap;  // L2 or L3
    std::vector<double> L_cascade;  // L1 or 0.5(d^2 xe^2 + vbare^2)
    std::vector<double> L4;         // track only
    std::vector<double> W;          // sqrt(L_cascade)
    std::vector<double> dLlyap_fd;
    std::vector<double> dLlyap_pred;
    std::vector<double> dLcas_fd;
    std::vector<double> dLcas_pred;
    std::vector<double> c_coeff;  // c2(t) or c4(t)
    double max_lyap_residual = 0;
    double max_cascade_residual = 0;
    double max_step_increase = 0;        // of L2 / L3 between samples
    double min_margin_logged = 0;        // min over samples of bound - pred, logged c
    double min_margin_cs = 0;            // same with the Cauchy-Schwarz coefficient
    bool decrease_ok = false;            // max_step_increase <= increase_tol
    bool residual_ok = false;            // max_lyap_residual <= residual_tol
};

MonitorReport lyapunov_monitor(const TimeSeries& ts, const Scenario& sc,
                               double residual_tol, double increase_tol = 1e-8);

// Linearization of the transformed error subsystem under the tracking law
// about zero error (bilinear products evaluated at the reference yaw rate).
// Used for small-perturbation cross-checks and rate estimation only.
struct LinTrackState {
    double ze;
    double psie;
    double re;
    double ubare;
};

LinTrackState linearized_track_rhs(const LinTrackState& e, const RefSignals& ref,
                                   const TrackGains& g, const ReducedParams& rp);

// Least-squares slope of log(norm) over the trailing `window_fraction` of the
// series (samples with norm < 1e-12 are dropped). gamma = -slope.
struct RateFit {
    double gamma;
    double rms_residual;
    std::size_t n;
};

RateFit exp_rate_fit(std::span<const double> t, std::span<const double> norm,
                     double window_fraction = 0.5);
RateFit exp_rate_fit(const TimeSeries& ts, double window_fraction = 0.5);

// The four bundled demonstration scenarios (section-5 gains and parameters).
namespace presets {
Scenario stabilize_offset();   // from (-2, 2, 0, 0, 0, 0)
Scenario stabilize_lateral();  // from (0, 2, 0, 0, 0, 0)
Scenario track_line();         // 4 m/s straight line, ship 40 m abeam
Scenario track_circle();       // slow circle, ship at rest at the origin
}  // namespace presets

}  // namespace shipctl
