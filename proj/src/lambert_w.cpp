#include "isodelay/lambert_w.hpp"

#include "isodelay/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace isodelay {

namespace {

// 1/e split into a double and its rounding residual.
constexpr double kInvE = 0.36787944117144232160;
constexpr double kInvELow = -1.2428753672788363168e-17;
constexpr double kE = 2.71828182845904523536;

// Series about the branch point in p = +-sqrt(2(e x + 1)).
double branch_point_series(double p) {
    constexpr double c[] = {-1.0,
                            1.0,
                            -1.0 / 3.0,
                            11.0 / 72.0,
                            -43.0 / 540.0,
                            769.0 / 17280.0,
                            -221.0 / 8505.0,
                            680863.0 / 43545600.0,
                            -1963.0 / 204120.0};
    double w = 0.0;
    for (int i = 8; i >= 0; --i) {
        w = w * p + c[i];
    }
    return w;
}

double initial_guess(LambertBranch branch, double x, double p) {
    if (branch == LambertBranch::Principal) {
        if (p < 0.5) {
            return branch_point_series(p);
        }
        if (x < 1.0) {
            // Pade-like start, accurate near 0.
            return x * (1.0 + 4.0 / 3.0 * x) / (1.0 + 7.0 / 3.0 * x + 5.0 / 6.0 * x * x);
        }
        const double l1 = std::log(x);
        const double l2 = std::log(l1 > 1.0 ? l1 : 1.0);
        return l1 - l2 + (l1 > 1.0 ? l2 / l1 : 0.0);
    }
    if (p < 0.5) {
        return branch_point_series(-p);
    }
    const double l1 = std::log(-x);
    const double l2 = std::log(-l1);
    return l1 - l2 + l2 / l1;
}

}  // namespace

double lambert_w(LambertBranch branch, double x) {
    if (std::isnan(x)) {
        throw DomainError("lambert_w: NaN argument");
    }
    if (x < -kInvE) {
        throw DomainError("lambert_w: argument below -1/e: " + std::to_string(x));
    }
    if (branch == LambertBranch::MinusOne && x >= 0.0) {
        throw DomainError("lambert_w: W_-1 requires x < 0, got " + std::to_string(x));
    }
    if (branch == LambertBranch::Principal) {
        if (x == 0.0) {
            return 0.0;
        }
        if (std::isinf(x)) {
            return x;
        }
    }
    if (x == -kInvE) {
        return -1.0;
    }

    // Distance to the branch point with the low part of 1/e restored.
    const double shifted = (x + kInvE) + kInvELow;
    const double p = std::sqrt(std::max(0.0, 2.0 * kE * shifted));

    double w = initial_guess(branch, x, p);
    if (p < 1e-3) {
        // Series is exact to rounding here; Halley steps would only add noise
        // because w e^w is flat at w = -1.
        return w;
    }

    // Halley iteration on f(w) = w e^w - x.
    for (int iter = 0; iter < 64; ++iter) {
        const double ew = std::exp(w);
        const double f = w * ew - x;
        const double wp1 = w + 1.0;
        const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        const double step = f / denom;
        w -= step;
        if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(w))) {
            break;
        }
    }

    if (branch == LambertBranch::Principal && w < -1.0) {
        w = -1.0;
    }
    if (branch == LambertBranch::MinusOne && w > -1.0) {
        w = -1.0;
    }
    return w;
}

}  // namespace isodelay
