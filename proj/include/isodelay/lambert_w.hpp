#pragma once

namespace isodelay {

enum class LambertBranch {
    Principal,  ///< W_0, x >= -1/e, returns w >= -1
    MinusOne,   ///< W_-1, -1/e <= x < 0, returns w <= -1
};

/// Real Lambert W: solves w * exp(w) = x on the requested branch.
///
/// Residual |w e^w - x| <= 1e-12 * max(1, |x|). Throws DomainError outside
/// the branch domain. x equal to the double nearest -1/e maps to w = -1.
[[nodiscard]] double lambert_w(LambertBranch branch, double x);

}  // namespace isodelay
