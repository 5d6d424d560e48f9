#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace inoc {

using NodeId = std::int32_t;

/// Undirected simple graph over nodes 0..n-1, stored as a CSR adjacency
/// structure with sorted neighbor lists. Immutable after construction and
/// safe to share read-only.
class Graph {
public:
    Graph() = default;

    /// Validates and builds: rejects out-of-range ids, self-loops and
    /// duplicate edges. Edges may be given in either orientation.
    static Graph from_edges(NodeId node_count, const std::vector<std::pair<NodeId, NodeId>>& edges);

    NodeId node_count() const noexcept { return node_count_; }
    std::size_t edge_count() const noexcept { return adjacency_.size() / 2; }

    std::span<const NodeId> neighbors(NodeId u) const {
        return {adjacency_.data() + offsets_[u], adjacency_.data() + offsets_[u + 1]};
    }
    NodeId degree(NodeId u) const { return static_cast<NodeId>(offsets_[u + 1] - offsets_[u]); }
    bool has_edge(NodeId u, NodeId v) const;
    NodeId min_degree() const;

    /// Edge list with u < v, lexicographically sorted.
    std::vector<std::pair<NodeId, NodeId>> edges() const;

    bool operator==(const Graph& other) const = default;

private:
    NodeId node_count_ = 0;
    std::vector<std::size_t> offsets_{0};
    std::vector<NodeId> adjacency_;
};

Graph make_complete(NodeId n);
Graph make_star(NodeId n);   // node 0 is the center
Graph make_cycle(NodeId n);  // edges {i, (i+1) mod n}

/// Small-world construction: side x side grid (torus by default), 4-neighbor
/// lattice plus q undirected long-range contacts per node drawn with
/// probability proportional to d^-alpha over Manhattan distance d >= 2.
struct KleinbergParams {
    NodeId side = 10;
    int long_range_per_node = 1;   // q
    double clustering_exponent = 2.0;  // alpha
    std::uint64_t seed = 0;
    bool torus = true;
};

struct KleinbergBuildInfo {
    long retried_draws = 0;  // rejected duplicate draws that were re-drawn
    long skipped_draws = 0;  // draws abandoned after the retry budget
};

Graph make_kleinberg(const KleinbergParams& params, KleinbergBuildInfo* info = nullptr);

/// Long-range distance distribution shared by every node of a torus grid.
/// Exposed so the sampler itself can be tested statistically.
class TorusLongRange {
public:
    TorusLongRange(NodeId side, double alpha);

    int max_distance() const { return max_distance_; }
    /// Number of nodes at toroidal Manhattan distance d from any fixed node.
    long nodes_at_distance(int d) const;
    /// Unnormalized probability mass of distance class d: N(d) * d^-alpha.
    double weight_at_distance(int d) const;
    int sample_distance(std::mt19937_64& rng) const;
    /// Uniform offset (dx, dy) within the sampled distance class.
    std::pair<NodeId, NodeId> sample_offset(std::mt19937_64& rng) const;

private:
    NodeId side_;
    int max_distance_;
    std::vector<std::vector<std::pair<NodeId, NodeId>>> offsets_by_distance_;  // index: d - 2
    std::vector<double> cumulative_weight_;
};

bool is_cycle_graph(const Graph& g);

/// Per-player inoculation choices; bit = 1 means inoculated (secure).
struct StrategyProfile {
    std::vector<std::uint8_t> bits;

    static StrategyProfile all_insecure(NodeId n) { return {std::vector<std::uint8_t>(n, 0)}; }
    static StrategyProfile all_secure(NodeId n) { return {std::vector<std::uint8_t>(n, 1)}; }
    static StrategyProfile from_string(std::string_view zero_one);

    NodeId size() const { return static_cast<NodeId>(bits.size()); }
    bool secure(NodeId i) const { return bits[i] != 0; }
    void set(NodeId i, bool secure) { bits[i] = secure ? 1 : 0; }
    long secure_count() const;
    std::string to_string() const;

    bool operator==(const StrategyProfile&) const = default;
};

/// Attack components: connected components of the subgraph induced by the
/// insecure nodes. Secure nodes are unassigned (component_of == -1).
class ComponentView {
public:
    ComponentView(const Graph& g, const StrategyProfile& a);

    int component_of(NodeId i) const { return component_of_[i]; }
    int component_count() const { return static_cast<int>(sizes_.size()); }
    long component_size(int component) const { return sizes_[component]; }
    /// k_i of an insecure node i.
    long size_for(NodeId i) const { return sizes_[component_of_[i]]; }
    long insecure_count() const { return insecure_count_; }

private:
    std::vector<int> component_of_;
    std::vector<long> sizes_;
    long insecure_count_ = 0;
};

ComponentView attack_components(const Graph& g, const StrategyProfile& a);

/// For a secure node: 1 + total size of the distinct insecure components
/// adjacent to i, i.e. the component that would form if i dropped protection.
/// For an insecure node this returns its current component size.
long hypothetical_component_size(const Graph& g, const StrategyProfile& a, NodeId i);
long hypothetical_component_size(const Graph& g, const StrategyProfile& a, const ComponentView& view,
                                 NodeId i);

/// Edge-list text format: "n <count>" then one "u v" line per edge with
/// u < v. The loader reports offending line numbers.
Graph load_edge_list(std::istream& in);
Graph load_edge_list_file(const std::string& path);
void save_edge_list(const Graph& g, std::ostream& out);
void save_edge_list_file(const Graph& g, const std::string& path);

}  // namespace inoc
