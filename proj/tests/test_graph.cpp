#include "isodelay/errors.hpp"
#include "isodelay/graph.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

using namespace isodelay;

namespace {

struct Census {
    double mean = 0.0, var = 0.0;
};

// Direct census from adjacency, independent of the graph's own moment helpers.
Census census(const ContactGraph& g) {
    long double s1 = 0, s2 = 0;
    for (NodeId u = 0; u < g.node_count(); ++u) {
        const auto d = static_cast<long double>(g.neighbors(u).size());
        s1 += d;
        s2 += d * d;
    }
    const long double n = g.node_count();
    return {static_cast<double>(s1 / n), static_cast<double>(s2 / n - (s1 / n) * (s1 / n))};
}

}  // namespace

TEST_CASE("configuration model with Poisson degrees") {
    GraphSpec spec;
    spec.kind = GraphKind::ConfigurationPoisson;
    const auto g = generate_graph(spec, 7);
    CHECK_NOTHROW(g.check_invariants());
    const auto c = census(g);
    CHECK(c.mean == doctest::Approx(4.0).epsilon(0.02));
    CHECK(c.var >= 3.8);
    CHECK(c.var <= 4.2);
    CHECK(g.mean_degree() == doctest::Approx(c.mean).epsilon(1e-14));
    CHECK(g.degree_variance() == doctest::Approx(c.var).epsilon(1e-12));
    CHECK(g.effective_contacts() == doctest::Approx(c.mean + c.var / c.mean).epsilon(1e-12));
    const auto counts = g.degree_census();
    CHECK(std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}) == g.node_count());
}

TEST_CASE("preferential attachment is heavy tailed") {
    GraphSpec spec;
    spec.kind = GraphKind::BarabasiAlbert;
    const auto g = generate_graph(spec, 8);
    CHECK_NOTHROW(g.check_invariants());
    const auto c = census(g);
    CHECK(c.mean == doctest::Approx(4.0).epsilon(0.02));
    CHECK(std::sqrt(c.var) / c.mean > 1.0);
    std::size_t min_degree = g.node_count();
    for (NodeId u = 0; u < g.node_count(); ++u) {
        min_degree = std::min(min_degree, g.degree(u));
    }
    CHECK(min_degree >= 2);
}

TEST_CASE("small-world ring") {
    GraphSpec spec;
    spec.kind = GraphKind::WattsStrogatz;
    spec.node_count = 1000;
    spec.rewire = 0.0;
    const auto ring = generate_graph(spec, 9);
    for (NodeId u = 0; u < ring.node_count(); ++u) {
        REQUIRE(ring.degree(u) == 4);
    }
    CHECK(ring.degree_variance() == 0.0);
    CHECK(ring.neighbors(0)[0] == 1);

    spec.node_count = 100000;
    spec.rewire = 0.1;
    const auto g = generate_graph(spec, 9);
    CHECK_NOTHROW(g.check_invariants());
    CHECK(g.edge_count() == 200000);
    CHECK(census(g).mean == 4.0);
    CHECK(census(g).var > 0.0);
}

TEST_CASE("generation is seed-deterministic") {
    GraphSpec spec;
    spec.node_count = 2000;
    for (auto kind : {GraphKind::ConfigurationPoisson, GraphKind::BarabasiAlbert, GraphKind::WattsStrogatz}) {
        spec.kind = kind;
        std::ostringstream a, b, c;
        generate_graph(spec, 5).write_edge_list(a);
        generate_graph(spec, 5).write_edge_list(b);
        generate_graph(spec, 6).write_edge_list(c);
        CHECK(a.str() == b.str());
        CHECK(a.str() != c.str());
    }
}

TEST_CASE("edge-list construction cleans input") {
    const std::vector<std::pair<NodeId, NodeId>> edges{{0, 1}, {1, 0}, {2, 2}, {1, 2}, {0, 1}};
    const ContactGraph g(4, edges, GraphKind::ConfigurationPoisson, 0);
    CHECK(g.edge_count() == 2);
    CHECK(g.degree(1) == 2);
    CHECK(g.degree(3) == 0);
    std::ostringstream out;
    g.write_edge_list(out);
    CHECK(out.str() == "0 1\n1 2\n");
    const std::vector<std::pair<NodeId, NodeId>> bad{{0, 9}};
    CHECK_THROWS_AS(ContactGraph(4, bad, GraphKind::ConfigurationPoisson, 0), DomainError);
}

TEST_CASE("generator parameter errors") {
    GraphSpec spec;
    spec.node_count = 50;
    CHECK_THROWS_AS((void)generate_graph(spec, 1), DomainError);
    spec.node_count = 1000;
    spec.mean_degree = 0.5;
    CHECK_THROWS_AS((void)generate_graph(spec, 1), DomainError);
    spec.mean_degree = 4.0;
    spec.kind = GraphKind::WattsStrogatz;
    spec.rewire = 1.5;
    CHECK_THROWS_AS((void)generate_graph(spec, 1), DomainError);
    spec.rewire = 0.1;
    spec.node_count = 200;
    spec.mean_degree = 300.0;
    CHECK_THROWS_AS((void)generate_graph(spec, 1), DomainError);
    CHECK(graph_kind_from_string("ba") == GraphKind::BarabasiAlbert);
    CHECK(to_string(GraphKind::WattsStrogatz) == "ws");
    CHECK_THROWS_AS((void)graph_kind_from_string("er"), DomainError);
}

TEST_CASE("property: invariants hold across seeds and kinds") {
    GraphSpec spec;
    spec.node_count = 3000;
    for (auto kind : {GraphKind::ConfigurationPoisson, GraphKind::BarabasiAlbert, GraphKind::WattsStrogatz}) {
        spec.kind = kind;
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const auto g = generate_graph(spec, seed);
            CHECK_NOTHROW(g.check_invariants());
            for (NodeId u = 0; u < g.node_count(); ++u) {
                for (NodeId v : g.neighbors(u)) {
                    const auto back = g.neighbors(v);
                    REQUIRE(std::find(back.begin(), back.end(), u) != back.end());
                }
            }
        }
    }
}
