#include "isodelay/netsim.hpp"

#include "isodelay/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <ostream>
#include <thread>

namespace isodelay {

std::string to_string(SeedingMode mode) {
    switch (mode) {
        case SeedingMode::Uniform: return "uniform";
        case SeedingMode::DegreeProportional: return "degree";
    }
    return "unknown";
}

SeedingMode seeding_mode_from_string(const std::string& name) {
    if (name == "uniform") {
        return SeedingMode::Uniform;
    }
    if (name == "degree") {
        return SeedingMode::DegreeProportional;
    }
    throw DomainError("unknown seeding mode '" + name + "' (expected uniform or degree)");
}

std::vector<NodeEpiState> seed_infections(const ContactGraph& graph, std::size_t count, SeedingMode mode,
                                          std::uint64_t seed, int day) {
    const std::size_t n = graph.node_count();
    if (count > n) {
        throw DomainError("cannot seed more infections than there are nodes");
    }
    Rng rng(seed);
    std::vector<NodeId> picked;
    picked.reserve(count);
    if (mode == SeedingMode::Uniform) {
        std::vector<NodeId> order(n);
        std::iota(order.begin(), order.end(), NodeId{0});
        for (std::size_t i = 0; i < count; ++i) {
            std::swap(order[i], order[i + rng.below(n - i)]);
            picked.push_back(order[i]);
        }
    } else {
        // Weighted sampling without replacement: keep the `count` largest
        // log(u) / w keys (Efraimidis-Spirakis).
        std::vector<std::pair<double, NodeId>> keys(n);
        for (NodeId u = 0; u < n; ++u) {
            const double weight = static_cast<double>(graph.degree(u));
            const double log_u = std::log1p(-rng.uniform());
            keys[u] = {weight > 0.0 ? log_u / weight : -std::numeric_limits<double>::infinity(), u};
        }
        auto larger = [](const auto& x, const auto& y) {
            return x.first > y.first || (x.first == y.first && x.second < y.second);
        };
        std::partial_sort(keys.begin(), keys.begin() + static_cast<std::ptrdiff_t>(count), keys.end(), larger);
        for (std::size_t i = 0; i < count; ++i) {
            picked.push_back(keys[i].second);
        }
    }
    std::vector<NodeEpiState> states(n);
    for (NodeId u : picked) {
        states[u].status = NodeStatus::Infectious;
        states[u].infection_day = day;
    }
    return states;
}

DayMetrics measure(const ContactGraph& graph, const std::vector<NodeEpiState>& states, int day) {
    DayMetrics m;
    m.day = day;
    std::uint64_t degree_total = 0;
    for (NodeId u = 0; u < states.size(); ++u) {
        switch (states[u].status) {
            case NodeStatus::Susceptible: ++m.susceptible; break;
            case NodeStatus::Infectious:
                ++m.infectious;
                degree_total += graph.degree(u);
                break;
            case NodeStatus::Isolated:
                ++m.isolated;
                degree_total += graph.degree(u);
                break;
            case NodeStatus::Removed: ++m.removed; break;
        }
    }
    const std::size_t infected = m.infectious + m.isolated;
    m.mean_inf_degree = infected == 0 ? std::numeric_limits<double>::quiet_NaN()
                                      : static_cast<double>(degree_total) / static_cast<double>(infected);
    return m;
}

void assign_isolation(NodeEpiState& node, int day, const EpidemicParams& params, Rng& rng) {
    if (params.alpha() <= 0.0 || !rng.bernoulli(params.alpha())) {
        return;
    }
    const int delay_days = static_cast<int>(std::lround(params.t_delay()));
    node.isolation_day = day + delay_days;
    if (delay_days == 0) {
        node.status = NodeStatus::Isolated;
    }
}

DayMetrics step_day(const ContactGraph& graph, std::vector<NodeEpiState>& states, const EpidemicParams& params,
                    int day, Rng& rng) {
    const std::size_t n = states.size();
    if (n != graph.node_count()) {
        throw DomainError("state vector does not match graph size");
    }
    const int next = day + 1;

    // Number of transmitting infectious neighbors per susceptible.
    std::vector<std::uint32_t> pressure(n, 0);
    std::vector<NodeId> exposed;
    for (NodeId u = 0; u < n; ++u) {
        if (states[u].status != NodeStatus::Infectious) {
            continue;
        }
        for (NodeId v : graph.neighbors(u)) {
            if (states[v].status == NodeStatus::Susceptible && pressure[v]++ == 0) {
                exposed.push_back(v);
            }
        }
    }
    std::sort(exposed.begin(), exposed.end());

    const double escape = 1.0 - params.rho();
    std::vector<NodeId> infected;
    for (NodeId v : exposed) {
        const double p = 1.0 - std::pow(escape, static_cast<double>(pressure[v]));
        if (rng.bernoulli(p)) {
            infected.push_back(v);
        }
    }

    const double p_recover = -std::expm1(-params.gamma());
    for (NodeId u = 0; u < n; ++u) {
        NodeEpiState& node = states[u];
        if (node.status != NodeStatus::Infectious && node.status != NodeStatus::Isolated) {
            continue;
        }
        if (rng.bernoulli(p_recover)) {
            node.status = NodeStatus::Removed;
            node.isolation_day.reset();
        } else if (node.status == NodeStatus::Infectious && node.isolation_day == next) {
            node.status = NodeStatus::Isolated;
        }
    }

    for (NodeId v : infected) {
        NodeEpiState& node = states[v];
        node.status = NodeStatus::Infectious;
        node.infection_day = next;
        assign_isolation(node, next, params, rng);
    }
    return measure(graph, states, next);
}

std::vector<DayMetrics> simulate_run(const ContactGraph& graph, const EnsembleConfig& config,
                                     std::uint64_t seeding_seed, std::uint64_t dynamics_seed) {
    if (config.days < 1) {
        throw DomainError("simulation horizon must be at least one day");
    }
    auto states = seed_infections(graph, config.initial_infected, config.seeding, seeding_seed, 1);
    Rng rng(dynamics_seed);
    for (auto& node : states) {
        if (node.status == NodeStatus::Infectious) {
            assign_isolation(node, 1, config.params, rng);
        }
    }
    std::vector<DayMetrics> days;
    days.reserve(static_cast<std::size_t>(config.days));
    days.push_back(measure(graph, states, 1));
    for (int day = 1; day < config.days; ++day) {
        days.push_back(step_day(graph, states, config.params, day, rng));
    }
    return days;
}

double EnsembleDay::stderr_inf_degree() const {
    return defined_runs == 0 ? std::numeric_limits<double>::quiet_NaN()
                             : stddev_inf_degree / std::sqrt(static_cast<double>(defined_runs));
}

NetworkEnsembleStats run_ensemble(const EnsembleConfig& config) {
    if (config.runs < 1) {
        throw DomainError("ensemble needs at least one run");
    }
    if (config.days < 1) {
        throw DomainError("simulation horizon must be at least one day");
    }
    NetworkEnsembleStats stats;
    stats.config = config;
    stats.runs.resize(config.runs);

    std::optional<ContactGraph> shared;
    if (config.reuse_graph) {
        shared.emplace(generate_graph(config.graph, derive_seed(config.base_seed, 0, 0)));
    }

    std::atomic<std::size_t> next_run{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t r = next_run++; r < config.runs; r = next_run++) {
            try {
                RunResult& result = stats.runs[r];
                result.run = r;
                result.graph_seed = derive_seed(config.base_seed, 0, config.reuse_graph ? 0 : r);
                result.seeding_seed = derive_seed(config.base_seed, 1, r);
                result.dynamics_seed = derive_seed(config.base_seed, 2, r);
                std::optional<ContactGraph> own;
                if (!shared) {
                    own.emplace(generate_graph(config.graph, result.graph_seed));
                }
                const ContactGraph& graph = shared ? *shared : *own;
                result.graph_mean_degree = graph.mean_degree();
                result.graph_effective_contacts = graph.effective_contacts();
                result.days = simulate_run(graph, config, result.seeding_seed, result.dynamics_seed);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        }
    };
    const unsigned threads =
        static_cast<unsigned>(std::clamp<std::size_t>(config.threads == 0 ? 1 : config.threads, 1, config.runs));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < threads; ++i) {
            pool.emplace_back(worker);
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    // Fixed-order reduction over runs.
    const auto run_count = static_cast<double>(config.runs);
    for (const auto& run : stats.runs) {
        stats.mean_graph_degree += run.graph_mean_degree;
        stats.mean_effective_contacts += run.graph_effective_contacts;
    }
    stats.mean_graph_degree /= run_count;
    stats.mean_effective_contacts /= run_count;

    stats.days.resize(static_cast<std::size_t>(config.days));
    for (std::size_t d = 0; d < stats.days.size(); ++d) {
        EnsembleDay& agg = stats.days[d];
        agg.day = static_cast<int>(d) + 1;
        double degree_sum = 0.0;
        for (const auto& run : stats.runs) {
            const DayMetrics& m = run.days[d];
            agg.mean_susceptible += static_cast<double>(m.susceptible);
            agg.mean_infectious += static_cast<double>(m.infectious);
            agg.mean_removed += static_cast<double>(m.removed);
            agg.mean_isolated += static_cast<double>(m.isolated);
            if (!std::isnan(m.mean_inf_degree)) {
                degree_sum += m.mean_inf_degree;
                ++agg.defined_runs;
            }
        }
        agg.mean_susceptible /= run_count;
        agg.mean_infectious /= run_count;
        agg.mean_removed /= run_count;
        agg.mean_isolated /= run_count;
        if (agg.defined_runs == 0) {
            agg.mean_inf_degree = std::numeric_limits<double>::quiet_NaN();
            agg.stddev_inf_degree = std::numeric_limits<double>::quiet_NaN();
            continue;
        }
        agg.mean_inf_degree = degree_sum / static_cast<double>(agg.defined_runs);
        double sq = 0.0;
        for (const auto& run : stats.runs) {
            const double v = run.days[d].mean_inf_degree;
            if (!std::isnan(v)) {
                sq += (v - agg.mean_inf_degree) * (v - agg.mean_inf_degree);
            }
        }
        agg.stddev_inf_degree =
            agg.defined_runs > 1 ? std::sqrt(sq / static_cast<double>(agg.defined_runs - 1)) : 0.0;
    }
    return stats;
}

namespace {

void write_optional(std::ostream& out, double v) {
    if (!std::isnan(v)) {
        out << v;
    }
}

}  // namespace

void NetworkEnsembleStats::write_runs_csv(std::ostream& out) const {
    const auto old_precision = out.precision(17);
    out << "day,run,S,I,R,isolated,mean_inf_degree\n";
    for (const auto& run : runs) {
        for (const auto& m : run.days) {
            out << m.day << ',' << run.run << ',' << m.susceptible << ',' << m.infectious << ',' << m.removed
                << ',' << m.isolated << ',';
            write_optional(out, m.mean_inf_degree);
            out << '\n';
        }
    }
    out.precision(old_precision);
}

void NetworkEnsembleStats::write_summary_csv(std::ostream& out) const {
    const auto old_precision = out.precision(17);
    out << "day,mean_S,mean_I,mean_R,mean_isolated,mean_inf_degree,stddev_inf_degree,defined_runs\n";
    for (const auto& d : days) {
        out << d.day << ',' << d.mean_susceptible << ',' << d.mean_infectious << ',' << d.mean_removed << ','
            << d.mean_isolated << ',';
        write_optional(out, d.mean_inf_degree);
        out << ',';
        write_optional(out, d.stddev_inf_degree);
        out << ',' << d.defined_runs << '\n';
    }
    out.precision(old_precision);
}

}  // namespace isodelay
