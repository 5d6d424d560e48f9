#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "inoc/graph.hpp"
#include "inoc/rational.hpp"

namespace inoc {

/// How a player weighs its neighbors' costs when deciding:
///   selfish  - own actual cost only (friendship factor ignored)
///   absolute - own cost plus F times the sum of neighbors' costs
///   relative - own cost plus F times the average of neighbors' costs
enum class CostModel { Selfish, Absolute, Relative };

CostModel parse_model(std::string_view name);
const char* model_name(CostModel model);

/// A graph plus the game parameters (C, L, F) and the cost model.
/// Parameters live in the admissible regime L/n < C <= L and 0 <= F <= 1.
/// Immutable; copies share the graph.
class GameInstance {
public:
    GameInstance(Graph graph, Rational inoculation_cost, Rational infection_loss,
                 Rational friendship_factor, CostModel model);
    GameInstance(std::shared_ptr<const Graph> graph, Rational inoculation_cost,
                 Rational infection_loss, Rational friendship_factor, CostModel model);

    const Graph& graph() const { return *graph_; }
    std::shared_ptr<const Graph> graph_ptr() const { return graph_; }
    NodeId n() const { return graph_->node_count(); }
    const Rational& inoculation_cost() const { return inoculation_cost_; }  // C
    const Rational& infection_loss() const { return infection_loss_; }      // L
    const Rational& friendship_factor() const { return friendship_factor_; }  // F as stored
    CostModel model() const { return model_; }

    /// F used in cost formulas: 0 under the selfish model.
    const Rational& effective_friendship() const { return effective_friendship_; }

    /// Same graph and C, L with a different model / friendship factor.
    GameInstance with_model(CostModel model, Rational friendship_factor) const;

    std::string summary() const;

private:
    std::shared_ptr<const Graph> graph_;
    Rational inoculation_cost_, infection_loss_, friendship_factor_, effective_friendship_;
    CostModel model_;
};

/// c_a(i): C if inoculated, else L * k_i / n with k_i the attack component size.
Rational actual_cost(const GameInstance& inst, const StrategyProfile& a, NodeId i);
Rational actual_cost(const GameInstance& inst, const ComponentView& view, const StrategyProfile& a,
                     NodeId i);

/// Perceived cost per the instance's model (c_a, c_p or c_r).
Rational perceived_cost(const GameInstance& inst, const StrategyProfile& a, NodeId i);
Rational perceived_cost(const GameInstance& inst, const ComponentView& view,
                        const StrategyProfile& a, NodeId i);

Rational social_cost(const GameInstance& inst, const StrategyProfile& a);

struct CostReport {
    std::vector<Rational> actual;
    std::vector<Rational> perceived;
    Rational social;
};
CostReport cost_report(const GameInstance& inst, const StrategyProfile& a);

/// The component-size threshold above which player i strictly prefers to
/// inoculate, with neighbor components evaluated as if i were secure.
Rational inoculation_threshold(const GameInstance& inst, const StrategyProfile& a, NodeId i);

struct BestResponse {
    bool prefer_secure;       // strategy the player settles on
    bool strictly_improves;   // true iff flipping beats the current choice
};

/// Compares perceived cost of the current strategy against the flip,
/// recomputing attack components under the flipped profile. Ties keep the
/// current strategy.
BestResponse best_response(const GameInstance& inst, const StrategyProfile& a, NodeId i);

struct Witness {
    NodeId node;
    bool improving_secure;  // the strategy the witness prefers
};

/// Reusable exact flip evaluator. Decisions are computed in cleared-
/// denominator integer arithmetic (128-bit) whenever the parameters fit,
/// with a transparent exact-rational fallback; both paths implement the
/// same strict-improvement comparison as best_response.
class DeviationOracle {
public:
    explicit DeviationOracle(const GameInstance& inst);

    /// Would flipping node i strictly lower its perceived cost?
    bool flip_improves(const StrategyProfile& a, NodeId i);

    /// First node with a strictly improving flip; nullopt at equilibrium.
    std::optional<Witness> find_improving(const StrategyProfile& a);

    bool integer_kernel() const { return fast_; }

private:
    bool flip_improves_at(const StrategyProfile& a, NodeId i);
    void build_components(const StrategyProfile& a);

    const GameInstance& inst_;
    bool fast_;
    // cleared-denominator parameter integers (valid when fast_)
    long long cn_, cd_, ln_, ld_, fn_, fd_;
    // token-stamped scratch; bumping a counter invalidates previous visits
    // without refilling the arrays
    std::vector<long long> base_token_, local_token_, merge_token_;
    std::vector<int> base_comp_, local_comp_;
    std::vector<long> base_size_, local_size_;
    long long build_gen_ = 0, check_gen_ = 0;
    std::vector<NodeId> stack_;
};

}  // namespace inoc
