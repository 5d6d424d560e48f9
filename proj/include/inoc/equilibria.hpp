#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "inoc/game.hpp"

namespace inoc {

inline constexpr NodeId kDefaultEnumerationCap = 20;

/// True iff no player has a strictly improving flip under the instance's
/// model; otherwise the witness names one improving player.
std::pair<bool, std::optional<Witness>> is_equilibrium(const GameInstance& inst,
                                                       const StrategyProfile& a);

struct EquilibriumRecord {
    StrategyProfile profile;
    Rational cost;
};

struct RejectedProfile {
    StrategyProfile profile;
    Witness witness;
};

struct EquilibriumReport {
    std::string instance_summary;
    CostModel model = CostModel::Selfish;
    Rational friendship_factor;
    std::vector<EquilibriumRecord> equilibria;  // every entry verified
    std::optional<Rational> best_cost, worst_cost;
    std::optional<EquilibriumRecord> optimum;
    std::optional<Rational> wof, poa;
    std::vector<RejectedProfile> rejected;  // filled by explicit candidate checks only
};

/// Exhaustive scan over all 2^n profiles under the requested model (the
/// instance's F applies unless the model is selfish). Rejects n > cap.
EquilibriumReport enumerate_equilibria(const GameInstance& inst, CostModel model,
                                       NodeId cap = kDefaultEnumerationCap);

/// Minimum social cost over all profiles; cost ties resolved toward the
/// lexicographically smallest profile. Rejects n > cap.
std::pair<StrategyProfile, Rational> social_optimum(const GameInstance& inst,
                                                    NodeId cap = kDefaultEnumerationCap);

/// Worst selfish equilibrium cost over worst equilibrium cost under the
/// instance's own model; nullopt when either set is empty.
std::optional<Rational> wof(const GameInstance& inst, NodeId cap = kDefaultEnumerationCap);

/// Worst selfish equilibrium cost over the social optimum cost.
std::optional<Rational> price_of_anarchy(const GameInstance& inst,
                                         NodeId cap = kDefaultEnumerationCap);

/// Enumeration under the instance's model plus optimum, WoF and PoA.
EquilibriumReport full_report(const GameInstance& inst, NodeId cap = kDefaultEnumerationCap);

/// One closed-form candidate: an insecure-player count, its social cost and
/// whether the exact stability conditions actually hold.
struct ClosedFormEntry {
    std::string label;        // "NE1", "FNE2", "OPT", ...
    long insecure_count = 0;
    Rational cost;
    bool exists = false;
};

struct ClosedFormResult {
    std::vector<ClosedFormEntry> entries;
    std::optional<bool> unique_fne;              // stars, friendship models
    std::optional<long> center_flip_min_leaves;  // minimal n0 making an insecure center flip
    std::vector<std::string> findings;           // literal lemma statements vs exact conditions

    /// Costs of existing entries whose label starts with the prefix.
    std::vector<Rational> cost_set(const std::string& label_prefix) const;
};

/// Complete-graph calculator: selfish equilibria, friendship equilibria for
/// the given F (absolute weighting), and the optimum component sizes.
ClosedFormResult closed_form_complete(NodeId n, const Rational& C, const Rational& L,
                                      const Rational& F);

/// Star-graph calculator (node 0 = center). Emits the selfish families, the
/// friendship families for the requested model, and the optimum. Center
/// stability of the leaf-insecure candidates is decided by exact integer
/// search rather than the floating floor/sqrt expression.
ClosedFormResult closed_form_star(NodeId n, const Rational& C, const Rational& L, const Rational& F,
                                  CostModel model);

/// (a) every neighbor of an insecure player is secure, and (b) every secure
/// player has at least one insecure neighbor.
bool characterization_check(const Graph& g, const StrategyProfile& a);

}  // namespace inoc
