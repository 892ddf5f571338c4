#pragma once

// Fixed-step method-of-steps integration of the delayed isolation models.
//
// Three systems are provided:
//   HomogeneousSystem  - nonlinear S, I, R with Q(t) = alpha e^{-gamma tau} I(t - tau)
//   PartitionedSystem  - infectious counts Y_k per contact degree, with the
//                        isolation-adjusted force of infection xi(t)
//   ReducedSystem      - population-level (I, lambda) pair
// Delayed arguments come from a cubic Hermite interpolant over the steps
// already taken, or from the user-supplied history for t - tau <= 0.

#include "isodelay/model.hpp"

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace isodelay {

using State = std::vector<double>;
using HistoryFn = std::function<State(double)>;

class DelaySystem {
public:
    virtual ~DelaySystem() = default;

    [[nodiscard]] virtual std::size_t dimension() const = 0;
    [[nodiscard]] virtual std::vector<std::string> component_names() const = 0;
    [[nodiscard]] virtual double delay() const = 0;

    /// dy/dt at time t given y(t) and y(t - delay()).
    virtual void rhs(double t, std::span<const double> y, std::span<const double> y_delayed,
                     std::span<double> dydt) const = 0;
};

/// Nonlinear homogeneous SIR with delayed isolation, in proportions.
class HomogeneousSystem final : public DelaySystem {
public:
    HomogeneousSystem(double beta, EpidemicParams params);

    [[nodiscard]] std::size_t dimension() const override { return 3; }
    [[nodiscard]] std::vector<std::string> component_names() const override { return {"S", "I", "R"}; }
    [[nodiscard]] double delay() const override { return params_.t_delay(); }
    void rhs(double t, std::span<const double> y, std::span<const double> y_delayed,
             std::span<double> dydt) const override;

    /// (1 - i0, i0, 0).
    [[nodiscard]] static State initial_state(double i0);

private:
    double beta_;
    EpidemicParams params_;
};

/// Whether susceptible counts are held at N_k (linearization) or evolve.
enum class SusceptibleMode { Frozen, Dynamic };

/// Per-degree infectious counts Y_k (individuals) for every populated k >= 1.
///
/// Components are Y_k in ascending k, followed by X_k in Dynamic mode. The
/// isolation fraction may vary by degree; by default every partition uses
/// params.alpha().
class PartitionedSystem final : public DelaySystem {
public:
    PartitionedSystem(DegreeDistribution dist, EpidemicParams params,
                      SusceptibleMode mode = SusceptibleMode::Frozen);

    /// alpha_k as a function of degree k.
    PartitionedSystem(DegreeDistribution dist, EpidemicParams params, SusceptibleMode mode,
                      const std::function<double(int)>& alpha_of_degree);

    [[nodiscard]] std::size_t dimension() const override;
    [[nodiscard]] std::vector<std::string> component_names() const override;
    [[nodiscard]] double delay() const override { return params_.t_delay(); }
    void rhs(double t, std::span<const double> y, std::span<const double> y_delayed,
             std::span<double> dydt) const override;

    [[nodiscard]] const std::vector<int>& degrees() const noexcept { return degrees_; }
    [[nodiscard]] SusceptibleMode mode() const noexcept { return mode_; }
    [[nodiscard]] const DegreeDistribution& distribution() const noexcept { return dist_; }

    /// Initial state from a seeding profile degree -> Y_k(0). Seeds on
    /// unpopulated or zero degrees are rejected.
    [[nodiscard]] State initial_state(const std::map<int, double>& y0_profile) const;

    /// Aggregate infectious proportion I = sum_k Y_k / N for a state.
    [[nodiscard]] double aggregate_infectious(std::span<const double> y) const;

private:
    DegreeDistribution dist_;
    EpidemicParams params_;
    SusceptibleMode mode_;
    std::vector<int> degrees_;
    std::vector<double> partition_sizes_;
    std::vector<double> alpha_;
    double contact_total_ = 0.0;  // sum_k k N_k
};

/// Population-level (I, lambda) system.
class ReducedSystem final : public DelaySystem {
public:
    ReducedSystem(const DegreeStats& stats, EpidemicParams params);

    [[nodiscard]] std::size_t dimension() const override { return 2; }
    [[nodiscard]] std::vector<std::string> component_names() const override { return {"I", "lambda"}; }
    [[nodiscard]] double delay() const override { return params_.t_delay(); }
    void rhs(double t, std::span<const double> y, std::span<const double> y_delayed,
             std::span<double> dydt) const override;

    [[nodiscard]] double beta_h() const noexcept { return beta_h_; }

private:
    double mu_;
    double beta_h_;
    EpidemicParams params_;
};

[[nodiscard]] HistoryFn constant_history(State state);
/// state * exp(rate * t) for t <= 0.
[[nodiscard]] HistoryFn exponential_history(State state, double rate);

/// Initial (I, lambda) consistent with a per-degree seeding.
struct ReducedInitialState {
    double i0 = 0.0;
    double lambda0 = 0.0;

    [[nodiscard]] State state() const { return {i0, lambda0}; }
};

[[nodiscard]] ReducedInitialState consistent_reduced_history(const DegreeDistribution& dist, double rho,
                                                             const std::map<int, double>& y0_profile);

/// Samples of an integrated system with cubic Hermite dense output.
class Trajectory {
public:
    Trajectory(std::vector<std::string> names, std::size_t dimension);

    void append(double t, std::span<const double> y, std::span<const double> dydt);

    [[nodiscard]] std::size_t size() const noexcept { return times_.size(); }
    [[nodiscard]] std::size_t dimension() const noexcept { return dimension_; }
    [[nodiscard]] const std::vector<std::string>& component_names() const noexcept { return names_; }
    [[nodiscard]] std::size_t component_index(const std::string& name) const;

    [[nodiscard]] const std::vector<double>& times() const noexcept { return times_; }
    [[nodiscard]] std::span<const double> state(std::size_t i) const;
    [[nodiscard]] std::span<const double> derivative(std::size_t i) const;
    [[nodiscard]] std::vector<double> series(std::size_t component) const;

    /// Dense output on [front, back]; exact at stored instants.
    [[nodiscard]] State interpolate(double t) const;
    void interpolate_into(double t, std::span<double> out) const;

    /// CSV `t,<names>` with 17 significant digits.
    void write_csv(std::ostream& out) const;

private:
    std::vector<std::string> names_;
    std::size_t dimension_;
    std::vector<double> times_;
    std::vector<double> states_;
    std::vector<double> derivs_;
};

struct IntegrationOptions {
    double dt = 0.01;
    /// Any |component| above this (or non-finite) aborts integration.
    double magnitude_cap = 1e150;
    /// Store every n-th step in the returned trajectory (history always uses every step).
    std::size_t output_stride = 1;
};

/// Classic RK4 from t = 0 to t_end; the first sample is history(0).
[[nodiscard]] Trajectory integrate(const DelaySystem& system, const HistoryFn& history, double t_end,
                                   const IntegrationOptions& options = {});

struct GrowthFit {
    double rate = 0.0;       ///< slope of log(observable) (1/day)
    double intercept = 0.0;  ///< log value at t = 0
    double residual_rms = 0.0;
    std::size_t samples = 0;
};

/// Least-squares slope of log(component) over samples with t in [t0, t1].
[[nodiscard]] GrowthFit estimate_growth_rate(const Trajectory& traj, std::size_t component, double t0,
                                             double t1);
/// Same, for a bare series sampled at `times`.
[[nodiscard]] GrowthFit estimate_growth_rate(std::span<const double> times, std::span<const double> values,
                                             double t0, double t1);

/// Start of the asymptotic window: 5 * max(1/gamma, T_delay).
[[nodiscard]] double transient_cutoff(const EpidemicParams& params);

}  // namespace isodelay
