#include "inoc/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "inoc/errors.hpp"
#include "inoc/rng.hpp"

namespace inoc {

Graph Graph::from_edges(NodeId node_count, const std::vector<std::pair<NodeId, NodeId>>& edges) {
    if (node_count < 1) throw InputError("graph needs at least one node");
    std::vector<std::pair<NodeId, NodeId>> normalized;
    normalized.reserve(edges.size());
    for (auto [u, v] : edges) {
        if (u < 0 || v < 0 || u >= node_count || v >= node_count)
            throw InputError("edge endpoint out of range: (" + std::to_string(u) + ", " +
                             std::to_string(v) + ")");
        if (u == v) throw InputError("self-loop at node " + std::to_string(u));
        normalized.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(normalized.begin(), normalized.end());
    if (std::adjacent_find(normalized.begin(), normalized.end()) != normalized.end())
        throw InputError("duplicate edge");

    Graph g;
    g.node_count_ = node_count;
    std::vector<NodeId> degree(node_count, 0);
    for (auto [u, v] : normalized) {
        ++degree[u];
        ++degree[v];
    }
    g.offsets_.assign(node_count + 1, 0);
    for (NodeId i = 0; i < node_count; ++i) g.offsets_[i + 1] = g.offsets_[i] + degree[i];
    g.adjacency_.resize(normalized.size() * 2);
    std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    for (auto [u, v] : normalized) {
        g.adjacency_[cursor[u]++] = v;
        g.adjacency_[cursor[v]++] = u;
    }
    for (NodeId i = 0; i < node_count; ++i)
        std::sort(g.adjacency_.begin() + g.offsets_[i], g.adjacency_.begin() + g.offsets_[i + 1]);
    return g;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

NodeId Graph::min_degree() const {
    NodeId best = node_count_ > 0 ? degree(0) : 0;
    for (NodeId i = 1; i < node_count_; ++i) best = std::min(best, degree(i));
    return best;
}

std::vector<std::pair<NodeId, NodeId>> Graph::edges() const {
    std::vector<std::pair<NodeId, NodeId>> out;
    out.reserve(edge_count());
    for (NodeId u = 0; u < node_count_; ++u)
        for (NodeId v : neighbors(u))
            if (u < v) out.emplace_back(u, v);
    return out;
}

Graph make_complete(NodeId n) {
    if (n < 2) throw InputError("complete graph needs n >= 2");
    std::vector<std::pair<NodeId, NodeId>> edges;
    edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v) edges.emplace_back(u, v);
    return Graph::from_edges(n, edges);
}

Graph make_star(NodeId n) {
    if (n < 2) throw InputError("star graph needs n >= 2");
    std::vector<std::pair<NodeId, NodeId>> edges;
    edges.reserve(n - 1);
    for (NodeId v = 1; v < n; ++v) edges.emplace_back(0, v);
    return Graph::from_edges(n, edges);
}

Graph make_cycle(NodeId n) {
    if (n < 3) throw InputError("cycle graph needs n >= 3");
    std::vector<std::pair<NodeId, NodeId>> edges;
    edges.reserve(n);
    for (NodeId u = 0; u < n; ++u) edges.emplace_back(u, (u + 1) % n);
    return Graph::from_edges(n, edges);
}

namespace {

int manhattan(NodeId ax, NodeId ay, NodeId bx, NodeId by, NodeId side, bool torus) {
    int dx = std::abs(ax - bx), dy = std::abs(ay - by);
    if (torus) {
        dx = std::min(dx, side - dx);
        dy = std::min(dy, side - dy);
    }
    return dx + dy;
}

}  // namespace

TorusLongRange::TorusLongRange(NodeId side, double alpha) : side_(side) {
    if (side < 2) throw InputError("grid side must be >= 2");
    max_distance_ = 2 * (side / 2);
    if (max_distance_ < 2) max_distance_ = 2;
    offsets_by_distance_.assign(std::max(0, max_distance_ - 1), {});
    for (NodeId dx = 0; dx < side; ++dx) {
        for (NodeId dy = 0; dy < side; ++dy) {
            int d = manhattan(0, 0, dx, dy, side, true);
            if (d >= 2) offsets_by_distance_[d - 2].emplace_back(dx, dy);
        }
    }
    cumulative_weight_.reserve(offsets_by_distance_.size());
    double total = 0.0;
    for (std::size_t i = 0; i < offsets_by_distance_.size(); ++i) {
        const double d = static_cast<double>(i + 2);
        total += static_cast<double>(offsets_by_distance_[i].size()) * std::pow(d, -alpha);
        cumulative_weight_.push_back(total);
    }
    if (total <= 0.0) throw InputError("grid too small for long-range contacts");
}

long TorusLongRange::nodes_at_distance(int d) const {
    if (d < 2 || d > max_distance_) return 0;
    return static_cast<long>(offsets_by_distance_[d - 2].size());
}

double TorusLongRange::weight_at_distance(int d) const {
    if (d < 2 || d > max_distance_) return 0.0;
    double lo = d == 2 ? 0.0 : cumulative_weight_[d - 3];
    return cumulative_weight_[d - 2] - lo;
}

int TorusLongRange::sample_distance(std::mt19937_64& rng) const {
    const double u = uniform_unit(rng) * cumulative_weight_.back();
    auto it = std::upper_bound(cumulative_weight_.begin(), cumulative_weight_.end(), u);
    if (it == cumulative_weight_.end()) --it;
    return static_cast<int>(it - cumulative_weight_.begin()) + 2;
}

std::pair<NodeId, NodeId> TorusLongRange::sample_offset(std::mt19937_64& rng) const {
    int d = sample_distance(rng);
    const auto& group = offsets_by_distance_[d - 2];
    return group[uniform_below(rng, group.size())];
}

Graph make_kleinberg(const KleinbergParams& params, KleinbergBuildInfo* info) {
    const NodeId side = params.side;
    if (side < 2) throw InputError("kleinberg grid side must be >= 2");
    if (params.long_range_per_node < 1) throw InputError("kleinberg needs q >= 1");
    if (params.clustering_exponent < 0) throw InputError("clustering exponent must be >= 0");

    const NodeId n = side * side;
    auto id = [side](NodeId x, NodeId y) { return x * side + y; };
    std::set<std::pair<NodeId, NodeId>> edges;
    auto add_edge = [&edges](NodeId u, NodeId v) {
        if (u == v) return false;
        return edges.emplace(std::min(u, v), std::max(u, v)).second;
    };

    for (NodeId x = 0; x < side; ++x) {
        for (NodeId y = 0; y < side; ++y) {
            if (params.torus) {
                add_edge(id(x, y), id((x + 1) % side, y));
                add_edge(id(x, y), id(x, (y + 1) % side));
            } else {
                if (x + 1 < side) add_edge(id(x, y), id(x + 1, y));
                if (y + 1 < side) add_edge(id(x, y), id(x, y + 1));
            }
        }
    }

    std::mt19937_64 rng(params.seed);
    KleinbergBuildInfo local;
    constexpr int kMaxAttempts = 100;

    if (params.torus) {
        TorusLongRange dist(side, params.clustering_exponent);
        for (NodeId x = 0; x < side; ++x) {
            for (NodeId y = 0; y < side; ++y) {
                for (int k = 0; k < params.long_range_per_node; ++k) {
                    bool placed = false;
                    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
                        auto [dx, dy] = dist.sample_offset(rng);
                        NodeId v = id((x + dx) % side, (y + dy) % side);
                        if (add_edge(id(x, y), v)) {
                            placed = true;
                            break;
                        }
                        ++local.retried_draws;
                    }
                    if (!placed) ++local.skipped_draws;
                }
            }
        }
    } else {
        // Bounded grid: distance classes differ per node, so build a CDF over
        // explicit candidates for each node.
        std::vector<NodeId> candidates;
        std::vector<double> cumulative;
        for (NodeId x = 0; x < side; ++x) {
            for (NodeId y = 0; y < side; ++y) {
                candidates.clear();
                cumulative.clear();
                double total = 0.0;
                for (NodeId vx = 0; vx < side; ++vx) {
                    for (NodeId vy = 0; vy < side; ++vy) {
                        int d = manhattan(x, y, vx, vy, side, false);
                        if (d < 2) continue;
                        candidates.push_back(id(vx, vy));
                        total += std::pow(static_cast<double>(d), -params.clustering_exponent);
                        cumulative.push_back(total);
                    }
                }
                for (int k = 0; k < params.long_range_per_node; ++k) {
                    bool placed = false;
                    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
                        const double u = uniform_unit(rng) * total;
                        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
                        if (it == cumulative.end()) --it;
                        NodeId v = candidates[it - cumulative.begin()];
                        if (add_edge(id(x, y), v)) {
                            placed = true;
                            break;
                        }
                        ++local.retried_draws;
                    }
                    if (!placed) ++local.skipped_draws;
                }
            }
        }
    }

    if (info) *info = local;
    std::vector<std::pair<NodeId, NodeId>> edge_list(edges.begin(), edges.end());
    return Graph::from_edges(n, edge_list);
}

bool is_cycle_graph(const Graph& g) {
    const NodeId n = g.node_count();
    if (n < 3) return false;
    for (NodeId i = 0; i < n; ++i)
        if (g.degree(i) != 2) return false;
    // Degree-2 everywhere: connected iff a single cycle.
    std::vector<char> seen(n, 0);
    NodeId prev = -1, cur = 0;
    for (NodeId steps = 0; steps < n; ++steps) {
        seen[cur] = 1;
        auto nb = g.neighbors(cur);
        NodeId next = (nb[0] == prev) ? nb[1] : nb[0];
        prev = cur;
        cur = next;
    }
    return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

StrategyProfile StrategyProfile::from_string(std::string_view zero_one) {
    StrategyProfile p;
    p.bits.reserve(zero_one.size());
    for (char c : zero_one) {
        if (c != '0' && c != '1') throw InputError("profile string must contain only 0 and 1");
        p.bits.push_back(c == '1' ? 1 : 0);
    }
    return p;
}

long StrategyProfile::secure_count() const {
    long count = 0;
    for (auto b : bits) count += b;
    return count;
}

std::string StrategyProfile::to_string() const {
    std::string s;
    s.reserve(bits.size());
    for (auto b : bits) s.push_back(b ? '1' : '0');
    return s;
}

ComponentView::ComponentView(const Graph& g, const StrategyProfile& a) {
    const NodeId n = g.node_count();
    if (a.size() != n) throw InputError("profile length does not match node count");
    component_of_.assign(n, -1);
    for (NodeId start = 0; start < n; ++start) {
        if (a.secure(start) || component_of_[start] != -1) continue;
        const int comp = static_cast<int>(sizes_.size());
        long size = 0;
        std::vector<NodeId> stack{start};
        component_of_[start] = comp;
        while (!stack.empty()) {
            NodeId u = stack.back();
            stack.pop_back();
            ++size;
            for (NodeId v : g.neighbors(u)) {
                if (!a.secure(v) && component_of_[v] == -1) {
                    component_of_[v] = comp;
                    stack.push_back(v);
                }
            }
        }
        sizes_.push_back(size);
        insecure_count_ += size;
    }
}

ComponentView attack_components(const Graph& g, const StrategyProfile& a) {
    return ComponentView(g, a);
}

long hypothetical_component_size(const Graph& g, const StrategyProfile& a, const ComponentView& view,
                                 NodeId i) {
    if (!a.secure(i)) return view.size_for(i);
    long size = 1;
    std::vector<int> seen;
    for (NodeId v : g.neighbors(i)) {
        if (a.secure(v)) continue;
        int comp = view.component_of(v);
        if (std::find(seen.begin(), seen.end(), comp) == seen.end()) {
            seen.push_back(comp);
            size += view.component_size(comp);
        }
    }
    return size;
}

long hypothetical_component_size(const Graph& g, const StrategyProfile& a, NodeId i) {
    return hypothetical_component_size(g, a, ComponentView(g, a), i);
}

Graph load_edge_list(std::istream& in) {
    std::string line;
    long line_no = 0;
    auto fail = [&line_no](const std::string& msg) {
        throw InputError("edge list line " + std::to_string(line_no) + ": " + msg);
    };

    NodeId n = 0;
    bool header_seen = false;
    std::vector<std::pair<NodeId, NodeId>> edges;
    std::set<std::pair<NodeId, NodeId>> seen;

    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        if (!header_seen) {
            std::string tag;
            if (!(ls >> tag >> n) || tag != "n" || n < 1) fail("expected header 'n <count>'");
            std::string extra;
            if (ls >> extra) fail("trailing content after header");
            header_seen = true;
            continue;
        }
        NodeId u, v;
        if (!(ls >> u >> v)) fail("expected 'u v'");
        std::string extra;
        if (ls >> extra) fail("trailing content after edge");
        if (u < 0 || v < 0 || u >= n || v >= n) fail("endpoint out of range");
        if (u == v) fail("self-loop");
        if (u >= v) fail("edges must be written with u < v");
        if (!seen.emplace(u, v).second) fail("duplicate edge");
        edges.emplace_back(u, v);
    }
    ++line_no;
    if (!header_seen) fail("missing header");
    return Graph::from_edges(n, edges);
}

Graph load_edge_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open graph file: " + path);
    try {
        return load_edge_list(in);
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

void save_edge_list(const Graph& g, std::ostream& out) {
    out << "n " << g.node_count() << "\n";
    for (auto [u, v] : g.edges()) out << u << " " << v << "\n";
}

void save_edge_list_file(const Graph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write graph file: " + path);
    save_edge_list(g, out);
    if (!out) throw InputError("error while writing graph file: " + path);
}

}  // namespace inoc
