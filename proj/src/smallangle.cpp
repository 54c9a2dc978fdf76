#include "shipctl/smallangle.hpp"

#include <cmath>

namespace shipctl::smallangle {

namespace {
constexpr double kSwitch = 0.25;
}

double cos_rem(double x) {
    if (std::abs(x) < kSwitch) {
        // x^4/24 - x^6/720 + x^8/40320 - x^10/3628800 + x^12/479001600
        const double x2 = x * x;
        return x2 * x2 *
               (1.0 / 24 +
                x2 * (-1.0 / 720 +
                      x2 * (1.0 / 40320 +
                            x2 * (-1.0 / 3628800 + x2 * (1.0 / 479001600)))));
    }
    const double s = std::sin(0.5 * x);
    return 0.5 * x * x - 2.0 * s * s;
}

double sin_rem(double x) {
    if (std::abs(x) < kSwitch) {
        // -x^3/6 + x^5/120 - x^7/5040 + x^9/362880 - x^11/39916800
        const double x2 = x * x;
        return x * x2 *
               (-1.0 / 6 +
                x2 * (1.0 / 120 +
                      x2 * (-1.0 / 5040 +
                            x2 * (1.0 / 362880 + x2 * (-1.0 / 39916800)))));
    }
    return std::sin(x) - x;
}

}  // namespace shipctl::smallangle
