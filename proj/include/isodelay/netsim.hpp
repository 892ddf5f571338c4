#pragma once

// Discrete-day stochastic SIR with delayed case isolation on contact graphs.

#include "isodelay/graph.hpp"
#include "isodelay/model.hpp"
#include "isodelay/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace isodelay {

enum class NodeStatus : std::uint8_t { Susceptible, Infectious, Removed, Isolated };

/// Per-node state. isolation_day is set only for nodes drawn for isolation,
/// and then equals infection_day + round(T_delay).
struct NodeEpiState {
    NodeStatus status = NodeStatus::Susceptible;
    std::optional<int> infection_day;
    std::optional<int> isolation_day;
};

enum class SeedingMode { Uniform, DegreeProportional };

[[nodiscard]] std::string to_string(SeedingMode mode);
[[nodiscard]] SeedingMode seeding_mode_from_string(const std::string& name);

/// Initial states with `count` distinct infectious nodes on day `day`.
///
/// Uniform samples without replacement; DegreeProportional samples without
/// replacement with weights proportional to degree (degree-0 nodes only once
/// every positive-degree node is taken).
[[nodiscard]] std::vector<NodeEpiState> seed_infections(const ContactGraph& graph, std::size_t count,
                                                        SeedingMode mode, std::uint64_t seed, int day = 1);

struct DayMetrics {
    int day = 0;
    std::size_t susceptible = 0;
    std::size_t infectious = 0;  ///< infectious and not isolated
    std::size_t removed = 0;
    std::size_t isolated = 0;
    /// Mean degree over infectious plus isolated nodes; NaN when there are none.
    double mean_inf_degree = 0.0;
};

[[nodiscard]] DayMetrics measure(const ContactGraph& graph, const std::vector<NodeEpiState>& states, int day);

/// Draws isolation scheduling for a node that became infectious on `day`.
/// A zero-day delay isolates immediately.
void assign_isolation(NodeEpiState& node, int day, const EpidemicParams& params, Rng& rng);

/// Advances states from day `day` to day + 1 and returns day + 1 metrics.
///
/// All transitions use the start-of-day state: susceptibles with m
/// transmitting neighbors are infected with probability 1 - (1 - rho)^m,
/// infectious nodes recover with probability 1 - exp(-gamma), scheduled
/// isolations take effect on their day.
DayMetrics step_day(const ContactGraph& graph, std::vector<NodeEpiState>& states, const EpidemicParams& params,
                    int day, Rng& rng);

struct EnsembleConfig {
    GraphSpec graph;
    EpidemicParams params{0.2, 0.1, 0.0, 0.0};
    SeedingMode seeding = SeedingMode::Uniform;
    std::size_t initial_infected = 10;
    std::size_t runs = 1;
    /// Number of recorded days, day 1 being the seeding day.
    int days = 30;
    std::uint64_t base_seed = 1;
    bool reuse_graph = false;
    unsigned threads = 1;
};

struct RunResult {
    std::size_t run = 0;
    std::uint64_t graph_seed = 0;
    std::uint64_t seeding_seed = 0;
    std::uint64_t dynamics_seed = 0;
    double graph_mean_degree = 0.0;
    double graph_effective_contacts = 0.0;  ///< mu + sigma^2 / mu
    std::vector<DayMetrics> days;
};

struct EnsembleDay {
    int day = 0;
    double mean_susceptible = 0.0;
    double mean_infectious = 0.0;
    double mean_removed = 0.0;
    double mean_isolated = 0.0;
    /// Over runs where the metric is defined.
    double mean_inf_degree = 0.0;
    double stddev_inf_degree = 0.0;
    std::size_t defined_runs = 0;

    [[nodiscard]] double stderr_inf_degree() const;
};

struct NetworkEnsembleStats {
    EnsembleConfig config;
    std::vector<RunResult> runs;
    std::vector<EnsembleDay> days;
    double mean_graph_degree = 0.0;
    double mean_effective_contacts = 0.0;

    [[nodiscard]] std::size_t run_count() const noexcept { return runs.size(); }

    /// `day,run,S,I,R,isolated,mean_inf_degree`.
    void write_runs_csv(std::ostream& out) const;
    /// `day,mean_S,mean_I,mean_R,mean_isolated,mean_inf_degree,stddev_inf_degree,defined_runs`.
    void write_summary_csv(std::ostream& out) const;
};

/// Single simulation on a given graph.
[[nodiscard]] std::vector<DayMetrics> simulate_run(const ContactGraph& graph, const EnsembleConfig& config,
                                                   std::uint64_t seeding_seed, std::uint64_t dynamics_seed);

/// Independent runs with seeds derived from base_seed; results do not
/// depend on thread count.
[[nodiscard]] NetworkEnsembleStats run_ensemble(const EnsembleConfig& config);

}  // namespace isodelay
