#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace isodelay {

enum class GraphKind { ConfigurationPoisson, BarabasiAlbert, WattsStrogatz };

[[nodiscard]] std::string to_string(GraphKind kind);
[[nodiscard]] GraphKind graph_kind_from_string(const std::string& name);

struct GraphSpec {
    GraphKind kind = GraphKind::ConfigurationPoisson;
    std::size_t node_count = 100000;
    double mean_degree = 4.0;
    /// Watts-Strogatz rewiring probability.
    double rewire = 0.1;
    /// Barabasi-Albert attachment count; defaults to round(mean_degree / 2).
    std::optional<int> attachments;
};

using NodeId = std::uint32_t;

/// Simple undirected graph in compressed adjacency form.
///
/// No self-loops, no multi-edges, symmetric neighbor lists sorted ascending.
class ContactGraph {
public:
    /// Builds from an edge list; duplicates and self-loops are dropped.
    ContactGraph(std::size_t node_count, std::span<const std::pair<NodeId, NodeId>> edges, GraphKind kind,
                 std::uint64_t seed);

    [[nodiscard]] std::size_t node_count() const noexcept { return offsets_.size() - 1; }
    [[nodiscard]] std::size_t edge_count() const noexcept { return neighbors_.size() / 2; }
    [[nodiscard]] std::size_t degree(NodeId u) const noexcept { return offsets_[u + 1] - offsets_[u]; }
    [[nodiscard]] std::span<const NodeId> neighbors(NodeId u) const noexcept {
        return {neighbors_.data() + offsets_[u], degree(u)};
    }
    [[nodiscard]] GraphKind kind() const noexcept { return kind_; }
    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }

    [[nodiscard]] std::vector<std::uint64_t> degree_census() const;
    [[nodiscard]] double mean_degree() const;
    /// Population variance of the degree sequence.
    [[nodiscard]] double degree_variance() const;
    /// mu + sigma^2 / mu from the graph's own degree sequence.
    [[nodiscard]] double effective_contacts() const;

    /// Throws DomainError if symmetry, self-loop or duplicate invariants fail.
    void check_invariants() const;

    /// One `u v` line per undirected edge with u < v.
    void write_edge_list(std::ostream& out) const;

private:
    std::vector<std::size_t> offsets_;
    std::vector<NodeId> neighbors_;
    GraphKind kind_;
    std::uint64_t seed_;
};

/// Reproducible random graph for `spec` from `seed`.
///
/// ConfigurationPoisson: Poisson(mu) degrees, uniform stub pairing, erased
/// self-loops and multi-edges. BarabasiAlbert: preferential attachment with
/// m edges per new node from an (m+1)-clique. WattsStrogatz: ring lattice with
/// k = nearest even integer to mu, each lattice edge rewired with probability
/// `rewire`.
[[nodiscard]] ContactGraph generate_graph(const GraphSpec& spec, std::uint64_t seed);

}  // namespace isodelay
