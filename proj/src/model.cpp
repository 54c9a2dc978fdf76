#include "shipctl/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace shipctl {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("invalid ship parameters: ") + what);
}

}  // namespace

void ShipParams::validate() const {
    for (double q : {m11, m22, m23, m33, d11, d22, d23, d32, d33})
        require(std::isfinite(q), "non-finite entry");
    require(m11 > 0, "m11 must be > 0");
    require(m22 > 0, "m22 must be > 0");
    require(m33 > 0, "m33 must be > 0");
    require(d11 > 0, "d11 must be > 0");
    require(d22 > 0, "d22 must be > 0");
    require(d33 > 0, "d33 must be > 0");
    require(m23 != 0, "m23 must be nonzero (coupled sway/yaw inertia)");
    require(d23 != 0, "d23 must be nonzero (coupled sway/yaw damping)");
    require(m22 * m33 - m23 * m23 > 0, "m22*m33 - m23^2 must be > 0");
}

ReducedParams derive_reduced(const ShipParams& p) {
    p.validate();
    return {p.m23 / p.m22, p.d23 / p.m22, p.m11 / p.m22, p.d22 / p.m22,
            p.m22 * p.m33 - p.m23 * p.m23};
}

PoseRates kinematics_rhs(const ShipState& s) {
    const double c = std::cos(s.psi);
    const double sn = std::sin(s.psi);
    return {s.u * c - s.v * sn, s.u * sn + s.v * c, s.r};
}

VelRates reduced_dynamics_rhs(double u, double v, double r,
                              const ReducedInputs& in, const ReducedParams& rp) {
    return {in.tau1, -rp.a * in.tau2 - rp.b * r - rp.c * u * r - rp.d * v, in.tau2};
}

ReducedInputs input_to_reduced(const ShipState& s, const TrueInputs& in,
                               const ShipParams& p) {
    const double u = s.u, v = s.v, r = s.r;
    const double delta = p.m22 * p.m33 - p.m23 * p.m23;
    const double tau1 = (in.tau_u - r * (-p.m22 * v - p.m23 * r) - p.d11 * u) / p.m11;
    const double tau2 = (p.m22 * in.tau_r + (p.m11 - p.m22) * (p.m23 * r + p.m22 * v) * u +
                         (p.m23 * p.d22 - p.m22 * p.d32) * v +
                         (p.m23 * p.d23 - p.m22 * p.d33) * r) /
                        delta;
    return {tau1, tau2};
}

TrueInputs input_from_reduced(const ShipState& s, const ReducedInputs& in,
                              const ShipParams& p) {
    const double u = s.u, v = s.v, r = s.r;
    const double delta = p.m22 * p.m33 - p.m23 * p.m23;
    const double tau_u = p.m11 * in.tau1 - r * (p.m22 * v + p.m23 * r) + p.d11 * u;
    const double tau_r = (delta * in.tau2 - ((p.m11 - p.m22) * (p.m23 * r + p.m22 * v) * u +
                                             (p.m23 * p.d22 - p.m22 * p.d32) * v +
                                             (p.m23 * p.d23 - p.m22 * p.d33) * r)) /
                         p.m22;
    return {tau_u, tau_r};
}

VelRates full_dynamics_rhs(double u, double v, double r, const TrueInputs& in,
                           const ShipParams& p) {
    // rhs = tau - C(v)v - Dv, then the closed-form block inverse of M.
    const double f1 = in.tau_u + (p.m22 * v + p.m23 * r) * r - p.d11 * u;
    const double f2 = -p.m11 * u * r - p.d22 * v - p.d23 * r;
    const double f3 = in.tau_r - (p.m22 * v + p.m23 * r) * u + p.m11 * u * v -
                      p.d32 * v - p.d33 * r;
    const double delta = p.m22 * p.m33 - p.m23 * p.m23;
    return {f1 / p.m11, (p.m33 * f2 - p.m23 * f3) / delta,
            (-p.m23 * f2 + p.m22 * f3) / delta};
}

}  // namespace shipctl
