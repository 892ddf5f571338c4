#include "isodelay/errors.hpp"
#include "isodelay/netsim.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace isodelay;

namespace {

ContactGraph star(NodeId leaves) {
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId i = 1; i <= leaves; ++i) {
        edges.emplace_back(0, i);
    }
    return {leaves + 1, edges, GraphKind::ConfigurationPoisson, 0};
}

// Fraction of trials in which node 0 is infected after one day, with its
// first m neighbours infectious and everything else susceptible.
double one_day_infection_rate(NodeId m, double rho, int trials) {
    const auto g = star(3);
    const EpidemicParams p(rho, 1e-9, 0.0, 0.0);
    Rng rng(99);
    int hits = 0;
    for (int t = 0; t < trials; ++t) {
        std::vector<NodeEpiState> states(g.node_count());
        for (NodeId i = 1; i <= m; ++i) {
            states[i].status = NodeStatus::Infectious;
        }
        (void)step_day(g, states, p, 1, rng);
        hits += states[0].status == NodeStatus::Infectious;
    }
    return static_cast<double>(hits) / trials;
}

void check_binomial(double observed, double p, int trials) {
    const double sd = std::sqrt(p * (1 - p) / trials);
    CAPTURE(observed);
    CHECK(std::abs(observed - p) < 4.0 * sd);
}

EnsembleConfig small_config() {
    EnsembleConfig config;
    config.graph.node_count = 5000;
    config.runs = 6;
    config.days = 20;
    config.base_seed = 17;
    return config;
}

}  // namespace

TEST_CASE("seeding") {
    GraphSpec spec;
    spec.node_count = 1000;
    const auto g = generate_graph(spec, 3);

    auto all = seed_infections(g, g.node_count(), SeedingMode::Uniform, 1);
    for (const auto& s : all) {
        CHECK(s.status == NodeStatus::Infectious);
        CHECK(s.infection_day == 1);
    }
    all = seed_infections(g, g.node_count(), SeedingMode::DegreeProportional, 1);
    CHECK(measure(g, all, 1).infectious == g.node_count());

    const auto some = seed_infections(g, 10, SeedingMode::Uniform, 2);
    CHECK(measure(g, some, 1).infectious == 10);
    CHECK_THROWS_AS((void)seed_infections(g, 1001, SeedingMode::Uniform, 1), DomainError);
    CHECK(seeding_mode_from_string("degree") == SeedingMode::DegreeProportional);
    CHECK_THROWS_AS((void)seeding_mode_from_string("hub"), DomainError);
}

TEST_CASE("degree-proportional seeding is size biased") {
    GraphSpec spec;
    spec.node_count = 10000;
    const auto g = generate_graph(spec, 4);
    const double target = g.effective_contacts();

    // Monte Carlo over single-node seedings.
    double total = 0.0;
    const int samples = 10000;
    for (int s = 0; s < samples; ++s) {
        const auto states = seed_infections(g, 1, SeedingMode::DegreeProportional, 1000 + s);
        total += measure(g, states, 1).mean_inf_degree;
    }
    CHECK(total / samples == doctest::Approx(target).epsilon(0.02));
    CHECK(target == doctest::Approx(5.0).epsilon(0.05));

    spec.kind = GraphKind::WattsStrogatz;
    spec.rewire = 0.0;
    const auto ring = generate_graph(spec, 4);
    CHECK(measure(ring, seed_infections(ring, 50, SeedingMode::DegreeProportional, 3), 1).mean_inf_degree == 4.0);
}

TEST_CASE("transmission probabilities") {
    const int trials = 40000;
    check_binomial(one_day_infection_rate(1, 0.2, trials), 0.2, trials);
    check_binomial(one_day_infection_rate(2, 0.2, trials), 0.36, trials);
    CHECK(one_day_infection_rate(3, 0.0, 2000) == 0.0);
}

TEST_CASE("recovery probability") {
    const auto g = star(0);
    const EpidemicParams p(0.0, 0.1, 0.0, 0.0);
    Rng rng(5);
    const int trials = 40000;
    int recovered = 0;
    for (int t = 0; t < trials; ++t) {
        std::vector<NodeEpiState> states(1);
        states[0].status = NodeStatus::Infectious;
        (void)step_day(g, states, p, 1, rng);
        recovered += states[0].status == NodeStatus::Removed;
    }
    check_binomial(static_cast<double>(recovered) / trials, 1.0 - std::exp(-0.1), trials);
}

TEST_CASE("isolation timing and effect") {
    const auto g = star(1);
    const EpidemicParams p(1.0, 1e-12, 1.0, 2.0);
    Rng rng(6);
    std::vector<NodeEpiState> states(2);
    states[1].status = NodeStatus::Infectious;
    states[1].infection_day = 1;
    assign_isolation(states[1], 1, p, rng);
    CHECK(states[1].isolation_day == 3);
    (void)step_day(g, states, p, 1, rng);
    CHECK(states[0].status == NodeStatus::Infectious);
    CHECK(states[0].isolation_day == 4);
    (void)step_day(g, states, p, 2, rng);
    CHECK(states[1].status == NodeStatus::Isolated);
    CHECK(states[0].status == NodeStatus::Infectious);
    (void)step_day(g, states, p, 3, rng);
    CHECK(states[0].status == NodeStatus::Isolated);

    // an isolated node never transmits
    std::vector<NodeEpiState> iso(2);
    iso[1].status = NodeStatus::Isolated;
    for (int d = 1; d < 50; ++d) {
        (void)step_day(g, iso, p, d, rng);
    }
    CHECK(iso[0].status == NodeStatus::Susceptible);

    // zero delay isolates at once
    NodeEpiState node;
    node.status = NodeStatus::Infectious;
    assign_isolation(node, 5, p.with_delay(0.4), rng);
    CHECK(node.status == NodeStatus::Isolated);
}

TEST_CASE("no transmission without rho") {
    auto config = small_config();
    config.params = EpidemicParams(0.0, 0.1, 0.0, 0.0);
    const auto stats = run_ensemble(config);
    for (const auto& run : stats.runs) {
        for (const auto& d : run.days) {
            CHECK(d.susceptible == config.graph.node_count - config.initial_infected);
        }
    }
}

TEST_CASE("property: conservation and absorbing transitions") {
    GraphSpec spec;
    spec.node_count = 3000;
    for (auto kind : {GraphKind::ConfigurationPoisson, GraphKind::BarabasiAlbert, GraphKind::WattsStrogatz}) {
        spec.kind = kind;
        const auto g = generate_graph(spec, 11);
        const EpidemicParams p(0.3, 0.1, 0.5, 2.0);
        auto states = seed_infections(g, 20, SeedingMode::Uniform, 12);
        Rng rng(13);
        std::size_t prev_removed = 0;
        for (int day = 1; day < 60; ++day) {
            const auto before = states;
            const auto m = step_day(g, states, p, day, rng);
            CHECK(m.susceptible + m.infectious + m.removed + m.isolated == g.node_count());
            CHECK(m.removed >= prev_removed);
            prev_removed = m.removed;
            for (std::size_t u = 0; u < states.size(); ++u) {
                const auto a = before[u].status;
                const auto b = states[u].status;
                if (a == b) {
                    continue;
                }
                const bool allowed = (a == NodeStatus::Susceptible && b == NodeStatus::Infectious) ||
                                     (a == NodeStatus::Susceptible && b == NodeStatus::Isolated) ||
                                     (a == NodeStatus::Infectious && b == NodeStatus::Isolated) ||
                                     (a == NodeStatus::Infectious && b == NodeStatus::Removed) ||
                                     (a == NodeStatus::Isolated && b == NodeStatus::Removed);
                REQUIRE(allowed);
            }
        }
    }
}

TEST_CASE("property: results do not depend on thread count") {
    auto config = small_config();
    config.params = EpidemicParams(0.2, 0.1, 0.3, 2.0);
    std::string reference;
    for (unsigned threads : {1u, 2u, 5u}) {
        config.threads = threads;
        const auto stats = run_ensemble(config);
        std::ostringstream out;
        stats.write_runs_csv(out);
        stats.write_summary_csv(out);
        if (reference.empty()) {
            reference = out.str();
        }
        CHECK(out.str() == reference);
    }
}

TEST_CASE("single-run ensemble matches a direct run") {
    auto config = small_config();
    config.runs = 1;
    const auto stats = run_ensemble(config);
    const auto& run = stats.runs.front();
    const auto g = generate_graph(config.graph, run.graph_seed);
    const auto direct = simulate_run(g, config, run.seeding_seed, run.dynamics_seed);
    REQUIRE(direct.size() == run.days.size());
    for (std::size_t i = 0; i < direct.size(); ++i) {
        CHECK(direct[i].infectious == run.days[i].infectious);
        CHECK(direct[i].removed == run.days[i].removed);
        CHECK(stats.days[i].mean_infectious == static_cast<double>(run.days[i].infectious));
    }
    CHECK(run.days.front().day == 1);
    CHECK(run.days.size() == static_cast<std::size_t>(config.days));
}

TEST_CASE("graph reuse flag") {
    auto config = small_config();
    config.reuse_graph = true;
    auto stats = run_ensemble(config);
    for (const auto& run : stats.runs) {
        CHECK(run.graph_seed == stats.runs.front().graph_seed);
    }
    config.reuse_graph = false;
    stats = run_ensemble(config);
    CHECK(stats.runs[0].graph_seed != stats.runs[1].graph_seed);
}

TEST_CASE("regular graph keeps infectious degree at four") {
    auto config = small_config();
    config.graph.kind = GraphKind::WattsStrogatz;
    config.graph.rewire = 0.0;
    const auto stats = run_ensemble(config);
    for (const auto& d : stats.days) {
        if (d.defined_runs > 0) {
            CHECK(d.mean_inf_degree == 4.0);
        }
    }
}

TEST_CASE("ensemble errors and output format") {
    auto config = small_config();
    config.runs = 0;
    CHECK_THROWS_AS((void)run_ensemble(config), DomainError);
    config.runs = 1;
    config.days = 0;
    CHECK_THROWS_AS((void)run_ensemble(config), DomainError);
    config.days = 2;
    const auto stats = run_ensemble(config);
    std::ostringstream runs, summary;
    stats.write_runs_csv(runs);
    stats.write_summary_csv(summary);
    CHECK(runs.str().rfind("day,run,S,I,R,isolated,mean_inf_degree\n", 0) == 0);
    CHECK(summary.str().rfind("day,mean_S,", 0) == 0);
}
