#include "isodelay/stability.hpp"

#include "isodelay/errors.hpp"
#include "isodelay/lambert_w.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace isodelay {

namespace {

constexpr double kMarginalMargin = 1e-9;
constexpr int kMaxNewtonIterations = 200;
constexpr double kNewtonTolerance = 1e-12;

using cplx = std::complex<double>;

cplx residual(const CharacteristicParams& cp, cplx s) {
    return s - cp.a - cp.b * std::exp(-s * cp.tau);
}

struct NewtonOutcome {
    cplx root;
    int iterations = 0;
    double residual = std::numeric_limits<double>::infinity();
    bool converged = false;
};

NewtonOutcome damped_newton(const CharacteristicParams& cp, cplx seed, double tolerance) {
    NewtonOutcome out;
    cplx s = seed;
    cplx g = residual(cp, s);
    for (int iter = 1; iter <= kMaxNewtonIterations; ++iter) {
        out.iterations = iter;
        if (std::abs(g) <= tolerance) {
            out.converged = true;
            break;
        }
        const cplx dg = 1.0 + cp.b * cp.tau * std::exp(-s * cp.tau);
        if (dg == 0.0) {
            break;
        }
        cplx step = -g / dg;
        cplx trial = s + step;
        cplx g_trial = residual(cp, trial);
        for (int halvings = 0; halvings < 40 && !(std::abs(g_trial) < std::abs(g)); ++halvings) {
            step *= 0.5;
            trial = s + step;
            g_trial = residual(cp, trial);
        }
        if (!(std::abs(g_trial) < std::abs(g))) {
            // Stalled at rounding level.
            break;
        }
        s = trial;
        g = g_trial;
    }
    out.root = s;
    out.residual = std::abs(g);
    out.converged = out.converged || out.residual <= tolerance;
    return out;
}

// Seeds in the scaled variable w = (s - a) tau, for w e^w = x with x < -1/e.
std::array<cplx, 3> principal_branch_seeds(double x) {
    using std::numbers::e;
    using std::numbers::pi;
    const cplx spec_seed(-1.0, pi / 2.0);
    // Series about the branch point with imaginary p.
    const cplx p(0.0, std::sqrt(-2.0 * (e * x + 1.0)));
    const cplx near_branch = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
    // Asymptotic expansion for large |x|.
    const cplx l1 = std::log(cplx(x, 0.0));
    const cplx l2 = std::log(l1);
    const cplx far = l1 - l2 + l2 / l1;
    return {spec_seed, near_branch, far};
}

}  // namespace

std::string to_string(VerdictKind kind) {
    switch (kind) {
        case VerdictKind::UnconditionallyStable: return "UnconditionallyStable";
        case VerdictKind::StableUpTo: return "StableUpTo";
        case VerdictKind::InfeasibleAtZeroDelay: return "InfeasibleAtZeroDelay";
    }
    return "Unknown";
}

CharacteristicParams characteristic_params(double beta_h, const EpidemicParams& params) {
    const double tau = params.t_delay();
    return {beta_h - params.gamma(), -beta_h * params.alpha() * std::exp(-params.gamma() * tau), tau};
}

std::complex<double> char_fn(std::complex<double> s, double beta_h, const EpidemicParams& params) {
    const double tau = params.t_delay();
    return s - beta_h * (1.0 - params.alpha() * std::exp(-(params.gamma() + s) * tau)) + params.gamma();
}

RootReport rightmost_root_report(const CharacteristicParams& cp) {
    if (!(cp.tau >= 0.0) || !std::isfinite(cp.a) || !std::isfinite(cp.b)) {
        throw DomainError("characteristic parameters must be finite with tau >= 0");
    }
    RootReport report;
    if (cp.tau == 0.0 || cp.b == 0.0) {
        report.root = cplx(cp.a + cp.b, 0.0);
        report.method = RootMethod::NoDelay;
        return report;
    }

    const double x = cp.b * cp.tau * std::exp(-cp.a * cp.tau);
    report.lambert_argument = x;
    if (!std::isfinite(x)) {
        throw NumericalError("rightmost_root: b*tau*exp(-a*tau) overflows");
    }
    if (x >= -1.0 / std::numbers::e) {
        const double w = lambert_w(LambertBranch::Principal, x);
        report.root = cplx(cp.a + w / cp.tau, 0.0);
        report.method = RootMethod::LambertReal;
        report.residual = std::abs(residual(cp, report.root));
        return report;
    }

    // Dominant complex pair: the principal branch has Im(w) in (0, pi).
    const double tolerance = kNewtonTolerance * std::max({1.0, std::abs(cp.a), std::abs(cp.b)});
    std::ostringstream diag;
    diag << "rightmost_root: Newton failed for a=" << cp.a << " b=" << cp.b << " tau=" << cp.tau
         << " (W argument " << x << ")";
    for (const cplx& w_seed : principal_branch_seeds(x)) {
        const cplx seed = cp.a + w_seed / cp.tau;
        const NewtonOutcome out = damped_newton(cp, seed, tolerance);
        const double scaled_imag = out.root.imag() * cp.tau;
        diag << "; seed " << seed << " -> " << out.root << " |f|=" << out.residual << " after "
             << out.iterations << " it";
        if (out.converged && scaled_imag > 0.0 && scaled_imag < std::numbers::pi) {
            report.root = out.root;
            report.method = RootMethod::ComplexNewton;
            report.iterations = out.iterations;
            report.residual = out.residual;
            return report;
        }
    }
    throw NumericalError(diag.str());
}

std::complex<double> rightmost_root(const CharacteristicParams& cp) {
    return rightmost_root_report(cp).root;
}

StabilityVerdict classify_delay(double beta_h, const EpidemicParams& params) {
    if (!(beta_h >= 0.0) || !std::isfinite(beta_h)) {
        throw DomainError("effective mixing rate must be finite and non-negative");
    }
    const double gamma = params.gamma();
    const double alpha = params.alpha();
    const double tau = params.t_delay();

    StabilityVerdict verdict;
    verdict.recovery_root = -gamma;
    verdict.signed_bound = std::numeric_limits<double>::quiet_NaN();

    bool analytic_stable = false;
    if (beta_h <= gamma) {
        verdict.kind = VerdictKind::UnconditionallyStable;
        // beta_h == gamma with alpha == 0 leaves a root exactly at the origin.
        analytic_stable = beta_h < gamma || alpha > 0.0;
    } else {
        verdict.signed_bound = std::log(alpha * beta_h / (beta_h - gamma)) / gamma;
        if (alpha <= 1.0 - gamma / beta_h || !(verdict.signed_bound > 0.0)) {
            verdict.kind = VerdictKind::InfeasibleAtZeroDelay;
        } else {
            verdict.kind = VerdictKind::StableUpTo;
            verdict.t_max = verdict.signed_bound;
            analytic_stable = tau < *verdict.t_max;
        }
    }

    verdict.rightmost_root = rightmost_root(characteristic_params(beta_h, params));
    verdict.margin = verdict.rightmost_root.real();
    verdict.stable =
        std::abs(verdict.margin) < kMarginalMargin ? analytic_stable : verdict.margin < 0.0;
    return verdict;
}

StabilityVerdict homogeneous_delay_bound(const EpidemicParams& params, double r0) {
    if (!(r0 > 0.0) || !std::isfinite(r0)) {
        throw DomainError("r0 must be positive, got " + std::to_string(r0));
    }
    return classify_delay(r0 * params.gamma(), params);
}

StabilityVerdict heterogeneous_delay_bound(const EpidemicParams& params, const DegreeStats& stats) {
    return classify_delay(effective_beta(params, stats), params);
}

std::optional<double> max_cv(double r0, double alpha) {
    if (!(r0 > 1.0)) {
        throw DomainError("max_cv requires r0 > 1, got " + std::to_string(r0));
    }
    if (alpha == 1.0) {
        throw DomainError("max_cv: alpha = 1 admits a positive delay for every c_v");
    }
    if (!(alpha >= 0.0 && alpha < 1.0)) {
        throw DomainError("max_cv requires alpha in [0, 1), got " + std::to_string(alpha));
    }
    const double radicand = 1.0 / (r0 * (1.0 - alpha)) - 1.0;
    if (!(radicand > 0.0)) {
        return std::nullopt;
    }
    return std::sqrt(radicand);
}

double degree_proportional_alpha(double alpha, const DegreeStats& stats, int max_degree) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw DomainError("alpha must lie in [0, 1]");
    }
    if (std::isnan(stats.k3)) {
        throw DomainError("degree_proportional_alpha needs the third moment of a full distribution");
    }
    const double denominator = static_cast<double>(max_degree) * stats.k2;
    if (!(denominator > 0.0)) {
        throw DomainError("degree_proportional_alpha: zero denominator n <k^2>");
    }
    return alpha * stats.k3 / denominator;
}

}  // namespace isodelay
