#include "isodelay/graph.hpp"

#include "isodelay/errors.hpp"
#include "isodelay/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <utility>

namespace isodelay {

std::string to_string(GraphKind kind) {
    switch (kind) {
        case GraphKind::ConfigurationPoisson: return "config";
        case GraphKind::BarabasiAlbert: return "ba";
        case GraphKind::WattsStrogatz: return "ws";
    }
    return "unknown";
}

GraphKind graph_kind_from_string(const std::string& name) {
    if (name == "config") {
        return GraphKind::ConfigurationPoisson;
    }
    if (name == "ba") {
        return GraphKind::BarabasiAlbert;
    }
    if (name == "ws") {
        return GraphKind::WattsStrogatz;
    }
    throw DomainError("unknown graph kind '" + name + "' (expected config, ba or ws)");
}

ContactGraph::ContactGraph(std::size_t node_count, std::span<const std::pair<NodeId, NodeId>> edges,
                           GraphKind kind, std::uint64_t seed)
    : kind_(kind), seed_(seed) {
    std::vector<std::pair<NodeId, NodeId>> clean;
    clean.reserve(edges.size());
    for (auto [u, v] : edges) {
        if (u >= node_count || v >= node_count) {
            throw DomainError("edge endpoint out of range");
        }
        if (u == v) {
            continue;
        }
        clean.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(clean.begin(), clean.end());
    clean.erase(std::unique(clean.begin(), clean.end()), clean.end());

    offsets_.assign(node_count + 1, 0);
    for (auto [u, v] : clean) {
        ++offsets_[u + 1];
        ++offsets_[v + 1];
    }
    for (std::size_t i = 0; i < node_count; ++i) {
        offsets_[i + 1] += offsets_[i];
    }
    neighbors_.resize(offsets_.back());
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (auto [u, v] : clean) {
        neighbors_[cursor[u]++] = v;
        neighbors_[cursor[v]++] = u;
    }
    for (std::size_t u = 0; u < node_count; ++u) {
        std::sort(neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[u]),
                  neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[u + 1]));
    }
}

std::vector<std::uint64_t> ContactGraph::degree_census() const {
    std::vector<std::uint64_t> census;
    for (NodeId u = 0; u < node_count(); ++u) {
        const std::size_t d = degree(u);
        if (d >= census.size()) {
            census.resize(d + 1, 0);
        }
        ++census[d];
    }
    return census;
}

double ContactGraph::mean_degree() const {
    return static_cast<double>(neighbors_.size()) / static_cast<double>(node_count());
}

double ContactGraph::degree_variance() const {
    const double mu = mean_degree();
    double total = 0.0;
    for (NodeId u = 0; u < node_count(); ++u) {
        const double d = static_cast<double>(degree(u)) - mu;
        total += d * d;
    }
    return total / static_cast<double>(node_count());
}

double ContactGraph::effective_contacts() const {
    const double mu = mean_degree();
    return mu + degree_variance() / mu;
}

void ContactGraph::check_invariants() const {
    for (NodeId u = 0; u < node_count(); ++u) {
        const auto adj = neighbors(u);
        for (std::size_t i = 0; i < adj.size(); ++i) {
            if (adj[i] == u) {
                throw DomainError("graph has a self-loop at node " + std::to_string(u));
            }
            if (i > 0 && adj[i] <= adj[i - 1]) {
                throw DomainError("graph has a duplicate edge at node " + std::to_string(u));
            }
            const auto back = neighbors(adj[i]);
            if (!std::binary_search(back.begin(), back.end(), u)) {
                throw DomainError("graph adjacency is not symmetric at node " + std::to_string(u));
            }
        }
    }
}

void ContactGraph::write_edge_list(std::ostream& out) const {
    for (NodeId u = 0; u < node_count(); ++u) {
        for (NodeId v : neighbors(u)) {
            if (u < v) {
                out << u << ' ' << v << '\n';
            }
        }
    }
}

namespace {

using EdgeList = std::vector<std::pair<NodeId, NodeId>>;

EdgeList configuration_poisson(std::size_t n, double mu, Rng& rng) {
    std::vector<std::uint64_t> degrees(n);
    std::uint64_t stubs_total = 0;
    for (auto& d : degrees) {
        d = rng.poisson(mu);
        stubs_total += d;
    }
    // Odd stub total: resample one node's degree until the parity fixes itself.
    while (stubs_total % 2 != 0) {
        const auto u = rng.below(n);
        stubs_total -= degrees[u];
        degrees[u] = rng.poisson(mu);
        stubs_total += degrees[u];
    }
    std::vector<NodeId> stubs;
    stubs.reserve(stubs_total);
    for (std::size_t u = 0; u < n; ++u) {
        stubs.insert(stubs.end(), degrees[u], static_cast<NodeId>(u));
    }
    for (std::size_t i = stubs.size(); i > 1; --i) {
        std::swap(stubs[i - 1], stubs[rng.below(i)]);
    }
    EdgeList edges;
    edges.reserve(stubs.size() / 2);
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
        edges.emplace_back(stubs[i], stubs[i + 1]);
    }
    return edges;
}

EdgeList barabasi_albert(std::size_t n, int m, Rng& rng) {
    if (m < 1) {
        throw DomainError("Barabasi-Albert attachment count must be at least 1");
    }
    const auto seed_size = static_cast<std::size_t>(m) + 1;
    if (n <= seed_size) {
        throw DomainError("Barabasi-Albert graph needs more than m + 1 nodes");
    }
    EdgeList edges;
    edges.reserve(seed_size * (seed_size - 1) / 2 + (n - seed_size) * static_cast<std::size_t>(m));
    // Each edge contributes both endpoints, so uniform draws are degree-proportional.
    std::vector<NodeId> endpoints;
    endpoints.reserve(2 * edges.capacity());
    for (NodeId u = 0; u < seed_size; ++u) {
        for (NodeId v = u + 1; v < seed_size; ++v) {
            edges.emplace_back(u, v);
            endpoints.push_back(u);
            endpoints.push_back(v);
        }
    }
    std::vector<NodeId> chosen;
    for (auto v = static_cast<NodeId>(seed_size); v < n; ++v) {
        chosen.clear();
        while (chosen.size() < static_cast<std::size_t>(m)) {
            const NodeId target = endpoints[rng.below(endpoints.size())];
            if (std::find(chosen.begin(), chosen.end(), target) == chosen.end()) {
                chosen.push_back(target);
            }
        }
        for (NodeId target : chosen) {
            edges.emplace_back(v, target);
            endpoints.push_back(v);
            endpoints.push_back(target);
        }
    }
    return edges;
}

EdgeList watts_strogatz(std::size_t n, double mu, double rewire, Rng& rng) {
    const int k = 2 * static_cast<int>(std::lround(mu / 2.0));
    if (k < 2 || static_cast<std::size_t>(k) >= n) {
        throw DomainError("Watts-Strogatz ring degree k=" + std::to_string(k) +
                          " must satisfy 2 <= k < node count");
    }
    if (!(rewire >= 0.0 && rewire <= 1.0)) {
        throw DomainError("Watts-Strogatz rewiring probability must lie in [0, 1]");
    }
    std::vector<std::vector<NodeId>> adj(n);
    for (std::size_t u = 0; u < n; ++u) {
        for (int j = 1; j <= k / 2; ++j) {
            const auto v = static_cast<NodeId>((u + static_cast<std::size_t>(j)) % n);
            adj[u].push_back(v);
            adj[v].push_back(static_cast<NodeId>(u));
        }
    }
    auto contains = [](const std::vector<NodeId>& list, NodeId x) {
        return std::find(list.begin(), list.end(), x) != list.end();
    };
    auto erase = [](std::vector<NodeId>& list, NodeId x) {
        list.erase(std::find(list.begin(), list.end(), x));
    };
    for (std::size_t u = 0; u < n; ++u) {
        const auto uid = static_cast<NodeId>(u);
        for (int j = 1; j <= k / 2; ++j) {
            const auto v = static_cast<NodeId>((u + static_cast<std::size_t>(j)) % n);
            if (!rng.bernoulli(rewire) || adj[u].size() + 1 >= n || !contains(adj[u], v)) {
                continue;
            }
            NodeId w = 0;
            do {
                w = static_cast<NodeId>(rng.below(n));
            } while (w == uid || contains(adj[u], w));
            erase(adj[u], v);
            erase(adj[v], uid);
            adj[u].push_back(w);
            adj[w].push_back(uid);
        }
    }
    EdgeList edges;
    edges.reserve(n * static_cast<std::size_t>(k) / 2);
    for (std::size_t u = 0; u < n; ++u) {
        for (NodeId v : adj[u]) {
            if (u < v) {
                edges.emplace_back(static_cast<NodeId>(u), v);
            }
        }
    }
    return edges;
}

}  // namespace

ContactGraph generate_graph(const GraphSpec& spec, std::uint64_t seed) {
    if (spec.node_count < 100) {
        throw DomainError("graph needs at least 100 nodes");
    }
    if (spec.node_count > std::numeric_limits<NodeId>::max()) {
        throw DomainError("graph node count exceeds 32-bit node ids");
    }
    if (!(spec.mean_degree >= 1.0) || !std::isfinite(spec.mean_degree)) {
        throw DomainError("mean degree must be at least 1");
    }
    Rng rng(seed);
    EdgeList edges;
    switch (spec.kind) {
        case GraphKind::ConfigurationPoisson:
            edges = configuration_poisson(spec.node_count, spec.mean_degree, rng);
            break;
        case GraphKind::BarabasiAlbert:
            edges = barabasi_albert(spec.node_count,
                                    spec.attachments.value_or(static_cast<int>(std::lround(spec.mean_degree / 2.0))),
                                    rng);
            break;
        case GraphKind::WattsStrogatz:
            edges = watts_strogatz(spec.node_count, spec.mean_degree, spec.rewire, rng);
            break;
    }
    return ContactGraph(spec.node_count, edges, spec.kind, seed);
}

}  // namespace isodelay
