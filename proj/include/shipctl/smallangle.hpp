#pragma once

namespace shipctl::smallangle {

// cos(x) - 1 + x^2/2, accurate to ~1e-15 relative for all x. The naive
// expression loses all significant bits below |x| ~ 1e-4; this switches to
// its Maclaurin tail there and to the half-angle form 0.5 x^2 - 2 sin^2(x/2)
// above.
double cos_rem(double x);

// sin(x) - x with the same treatment.
double sin_rem(double x);

}  // namespace shipctl::smallangle
