#pragma once

// Stability of the linearized delayed-isolation dynamics.
//
// Around the all-susceptible state the population-level system is upper
// triangular: one root is always -gamma and the rest solve
//
//     f(s) = s - beta_h * (1 - alpha * exp(-(gamma + s) * tau)) + gamma = 0,
//
// i.e. s = a + b exp(-s tau) with a = beta_h - gamma and
// b = -beta_h * alpha * exp(-gamma tau). Heterogeneous populations enter only
// through beta_h = rho * mu * h.

#include "isodelay/model.hpp"

#include <complex>
#include <optional>
#include <string>

namespace isodelay {

enum class VerdictKind {
    UnconditionallyStable,  ///< stable for every delay
    StableUpTo,             ///< stable iff T_delay < t_max
    InfeasibleAtZeroDelay,  ///< unstable even with T_delay = 0
};

[[nodiscard]] std::string to_string(VerdictKind kind);

struct StabilityVerdict {
    VerdictKind kind = VerdictKind::UnconditionallyStable;
    /// Set only for StableUpTo; always > 0.
    std::optional<double> t_max;
    /// (1/gamma) ln(alpha beta_h / (beta_h - gamma)) whenever beta_h > gamma:
    /// negative when infeasible, -inf when alpha = 0. NaN otherwise.
    double signed_bound = 0.0;
    /// Rightmost root of f at the queried delay.
    std::complex<double> rightmost_root;
    /// Re(rightmost_root).
    double margin = 0.0;
    /// Root of the decoupled I equation, always -gamma.
    double recovery_root = 0.0;
    /// Asymptotic stability at the queried delay.
    bool stable = false;
};

struct CharacteristicParams {
    double a = 0.0;
    double b = 0.0;
    double tau = 0.0;
};

/// Scalar characteristic parameters for mixing rate beta_h and delay params.t_delay().
[[nodiscard]] CharacteristicParams characteristic_params(double beta_h, const EpidemicParams& params);

/// Bound for the homogeneous model with basic reproduction number r0.
[[nodiscard]] StabilityVerdict homogeneous_delay_bound(const EpidemicParams& params, double r0);

/// Bound for a heterogeneous population, using beta_h = effective_beta(params, stats).
[[nodiscard]] StabilityVerdict heterogeneous_delay_bound(const EpidemicParams& params,
                                                         const DegreeStats& stats);

/// Classification for an explicit effective mixing rate.
[[nodiscard]] StabilityVerdict classify_delay(double beta_h, const EpidemicParams& params);

/// Largest coefficient of variation admitting a positive delay; nullopt
/// when even c_v = 0 admits none. Requires r0 > 1 and 0 <= alpha < 1.
[[nodiscard]] std::optional<double> max_cv(double r0, double alpha);

[[nodiscard]] std::complex<double> char_fn(std::complex<double> s, double beta_h,
                                           const EpidemicParams& params);

enum class RootMethod { NoDelay, LambertReal, ComplexNewton };

struct RootReport {
    std::complex<double> root;
    RootMethod method = RootMethod::NoDelay;
    int iterations = 0;
    double residual = 0.0;
    /// Argument of W_0; real root iff >= -1/e.
    double lambert_argument = 0.0;
};

/// Rightmost root of s = a + b exp(-s tau).
///
/// Real case via W_0; otherwise the dominant complex pair (positive
/// imaginary part reported) by damped Newton. Throws NumericalError when
/// Newton does not converge.
[[nodiscard]] RootReport rightmost_root_report(const CharacteristicParams& cp);
[[nodiscard]] std::complex<double> rightmost_root(const CharacteristicParams& cp);

/// Common isolation fraction equivalent to alpha_k = alpha * k / n:
/// alpha * <k^3> / (n <k^2>).
[[nodiscard]] double degree_proportional_alpha(double alpha, const DegreeStats& stats, int max_degree);

}  // namespace isodelay
