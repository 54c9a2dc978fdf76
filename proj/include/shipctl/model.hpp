#pragma once

namespace shipctl {

// Inertia and damping entries of the 3-DOF surface-vessel model. The surge
// axis is decoupled; sway/yaw are coupled through m23 and d23/d32, which is
// the regime this library targets (m23 = 0 or d23 = 0 is rejected).
struct ShipParams {
    double m11 = 25.8;
    double m22 = 33.8;
    double m23 = 1.0115;
    double m33 = 2.76;
    double d11 = 0.9257;
    double d22 = 2.8909;
    double d23 = -0.2601;
    double d32 = -0.2601;
    double d33 = 0.5;

    // Throws std::invalid_argument on any violated constraint
    // (positivity, nonzero couplings, m22*m33 - m23^2 > 0).
    void validate() const;

    static ShipParams defaults() { return {}; }

    bool operator==(const ShipParams&) const = default;
};

// Constants of the feedback-linearized velocity dynamics:
//   udot = tau1, rdot = tau2, vdot = -a*tau2 - b*r - c*u*r - d*v
struct ReducedParams {
    double a;      // m23/m22
    double b;      // d23/m22
    double c;      // m11/m22
    double d;      // d22/m22
    double delta;  // m22*m33 - m23^2
};

// Pose in the Earth-fixed frame plus body velocities. psi is an unwrapped
// real number; no modular reduction anywhere (the control laws feed psi
// linearly into the transformed sway state, so wrapping would introduce
// discontinuities).
struct ShipState {
    double x = 0;    // m
    double y = 0;    // m
    double psi = 0;  // rad, unwrapped
    double u = 0;    // surge velocity
    double v = 0;    // sway velocity
    double r = 0;    // yaw rate

    bool operator==(const ShipState&) const = default;
};

// Actuator-level inputs: surge force and yaw moment (no sway actuation).
struct TrueInputs {
    double tau_u = 0;
    double tau_r = 0;
};

// Inputs of the reduced dynamics.
struct ReducedInputs {
    double tau1 = 0;
    double tau2 = 0;
};

struct PoseRates {
    double x;
    double y;
    double psi;
};

struct VelRates {
    double u;
    double v;
    double r;
};

// Validates params and derives the reduced constants.
ReducedParams derive_reduced(const ShipParams& p);

// (xdot, ydot, psidot) = (u cos psi - v sin psi, u sin psi + v cos psi, r)
PoseRates kinematics_rhs(const ShipState& s);

VelRates reduced_dynamics_rhs(double u, double v, double r,
                              const ReducedInputs& in, const ReducedParams& rp);

// Actuator forces -> reduced inputs at the current velocities.
ReducedInputs input_to_reduced(const ShipState& s, const TrueInputs& in,
                               const ShipParams& p);

// Exact algebraic inverse of input_to_reduced.
TrueInputs input_from_reduced(const ShipState& s, const ReducedInputs& in,
                              const ShipParams& p);

// Velocity rates of the coupled model under actuator forces. The mass matrix
// is inverted in closed form (scalar surge row, 2x2 sway/yaw block with
// determinant delta), so this agrees with the reduced formulation exactly.
VelRates full_dynamics_rhs(double u, double v, double r, const TrueInputs& in,
                           const ShipParams& p);

}  // namespace shipctl
