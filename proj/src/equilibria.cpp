#include "inoc/equilibria.hpp"

#include <algorithm>
#include <cmath>

#include "inoc/errors.hpp"

namespace inoc {

std::pair<bool, std::optional<Witness>> is_equilibrium(const GameInstance& inst,
                                                       const StrategyProfile& a) {
    DeviationOracle oracle(inst);
    auto witness = oracle.find_improving(a);
    return {!witness.has_value(), witness};
}

namespace {

void require_cap(NodeId n, NodeId cap) {
    if (n > cap)
        throw CapExceeded("n=" + std::to_string(n) + " exceeds the exhaustive-search cap of " +
                          std::to_string(cap) + "; raise the cap to scan 2^" + std::to_string(n) +
                          " profiles");
    if (n > 62) throw CapExceeded("exhaustive search is limited to n <= 62");
}

void profile_from_mask(std::uint64_t mask, StrategyProfile& p) {
    for (NodeId i = 0; i < p.size(); ++i) p.bits[i] = (mask >> i) & 1u;
}

Rational social_cost_from_view(const GameInstance& inst, const ComponentView& view) {
    const long secure = inst.n() - view.insecure_count();
    Rational cost = Rational(secure) * inst.inoculation_cost();
    Rational infected(0);
    for (int c = 0; c < view.component_count(); ++c) {
        const long size = view.component_size(c);
        infected += Rational(size) * Rational(size);
    }
    return cost + infected * inst.infection_loss() / Rational(inst.n());
}

bool lex_less(const StrategyProfile& a, const StrategyProfile& b) {
    return std::lexicographical_compare(a.bits.begin(), a.bits.end(), b.bits.begin(),
                                        b.bits.end());
}

}  // namespace

EquilibriumReport enumerate_equilibria(const GameInstance& inst, CostModel model, NodeId cap) {
    const NodeId n = inst.n();
    require_cap(n, cap);
    GameInstance game = inst.model() == model ? inst : inst.with_model(model, inst.friendship_factor());

    EquilibriumReport report;
    report.instance_summary = game.summary();
    report.model = model;
    report.friendship_factor = game.effective_friendship();

    DeviationOracle oracle(game);
    StrategyProfile profile = StrategyProfile::all_insecure(n);
    const std::uint64_t total = 1ULL << n;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        profile_from_mask(mask, profile);
        if (oracle.find_improving(profile).has_value()) continue;
        ComponentView view(game.graph(), profile);
        report.equilibria.push_back({profile, social_cost_from_view(game, view)});
    }

    for (const auto& record : report.equilibria) {
        if (!report.best_cost || record.cost < *report.best_cost) report.best_cost = record.cost;
        if (!report.worst_cost || record.cost > *report.worst_cost) report.worst_cost = record.cost;
    }
    return report;
}

std::pair<StrategyProfile, Rational> social_optimum(const GameInstance& inst, NodeId cap) {
    const NodeId n = inst.n();
    require_cap(n, cap);

    StrategyProfile profile = StrategyProfile::all_insecure(n);
    StrategyProfile best_profile = profile;
    Rational best_cost;
    bool first = true;
    const std::uint64_t total = 1ULL << n;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        profile_from_mask(mask, profile);
        ComponentView view(inst.graph(), profile);
        Rational cost = social_cost_from_view(inst, view);
        if (first || cost < best_cost || (cost == best_cost && lex_less(profile, best_profile))) {
            best_cost = std::move(cost);
            best_profile = profile;
            first = false;
        }
    }
    return {best_profile, best_cost};
}

std::optional<Rational> wof(const GameInstance& inst, NodeId cap) {
    EquilibriumReport selfish = enumerate_equilibria(inst, CostModel::Selfish, cap);
    EquilibriumReport social = enumerate_equilibria(inst, inst.model(), cap);
    if (!selfish.worst_cost || !social.worst_cost) return std::nullopt;
    return *selfish.worst_cost / *social.worst_cost;
}

std::optional<Rational> price_of_anarchy(const GameInstance& inst, NodeId cap) {
    EquilibriumReport selfish = enumerate_equilibria(inst, CostModel::Selfish, cap);
    if (!selfish.worst_cost) return std::nullopt;
    auto [profile, cost] = social_optimum(inst, cap);
    return *selfish.worst_cost / cost;
}

EquilibriumReport full_report(const GameInstance& inst, NodeId cap) {
    EquilibriumReport report = enumerate_equilibria(inst, inst.model(), cap);
    auto [opt_profile, opt_cost] = social_optimum(inst, cap);
    report.optimum = EquilibriumRecord{std::move(opt_profile), std::move(opt_cost)};
    report.wof = wof(inst, cap);
    report.poa = price_of_anarchy(inst, cap);
    return report;
}

std::vector<Rational> ClosedFormResult::cost_set(const std::string& label_prefix) const {
    std::vector<Rational> costs;
    for (const auto& entry : entries) {
        if (!entry.exists) continue;
        if (entry.label.rfind(label_prefix, 0) != 0) continue;
        costs.push_back(entry.cost);
    }
    std::sort(costs.begin(), costs.end());
    costs.erase(std::unique(costs.begin(), costs.end()), costs.end());
    return costs;
}

namespace {

struct CanonicalParams {
    Rational C, L, F;
};

CanonicalParams require_admissible(NodeId n, const Rational& C, const Rational& L,
                                   const Rational& F) {
    if (n < 2) throw InputError("closed forms need n >= 2");
    CanonicalParams params{C, L, F};
    params.C.canonicalize();
    params.L.canonicalize();
    params.F.canonicalize();
    if (params.C * Rational(n) <= params.L || params.C > params.L)
        throw InputError("parameters must satisfy L/n < C <= L");
    if (params.F < 0 || params.F > 1) throw InputError("friendship factor must lie in [0, 1]");
    return params;
}

Rational pool_cost(NodeId n, const Rational& C, const Rational& L, long insecure) {
    // One attack component of `insecure` players, everyone else inoculated.
    return Rational(n - insecure) * C + Rational(insecure) * Rational(insecure) * L / Rational(n);
}

}  // namespace

ClosedFormResult closed_form_complete(NodeId n, const Rational& C_in, const Rational& L_in,
                                      const Rational& F_in) {
    const auto [C, L, F] = require_admissible(n, C_in, L_in, F_in);
    ClosedFormResult result;
    const Rational x = C * Rational(n) / L;  // Cn/L

    // Selfish equilibria: k insecure players stay put iff x-1 <= k <= x.
    auto ne_exists = [&](long k) {
        if (k < 1 || k > n) return false;
        if (Rational(k) > x) return false;                    // insecure players content
        if (k < n && Rational(k) < x - 1) return false;       // inoculated players content
        return true;
    };
    const long ne_low = ceil_long(x) - 1, ne_high = floor_long(x);
    result.entries.push_back({"NE1", ne_low, pool_cost(n, C, L, ne_low), ne_exists(ne_low)});
    if (ne_high != ne_low)
        result.entries.push_back({"NE2", ne_high, pool_cost(n, C, L, ne_high), ne_exists(ne_high)});

    // Friendship equilibria: (x-1)/(1+F) <= k <= (x+F)/(1+F).
    auto fne_exists = [&](long k) {
        if (k < 1 || k > n) return false;
        if (Rational(k) * (1 + F) > x + F) return false;
        if (k < n && Rational(k) * (1 + F) < x - 1) return false;
        return true;
    };
    const long fne_low = ceil_long((x - 1) / (1 + F)), fne_high = floor_long((x + F) / (1 + F));
    result.entries.push_back({"FNE1", fne_low, pool_cost(n, C, L, fne_low), fne_exists(fne_low)});
    if (fne_high != fne_low)
        result.entries.push_back(
            {"FNE2", fne_high, pool_cost(n, C, L, fne_high), fne_exists(fne_high)});

    const long opt_low = floor_long(x / 2), opt_high = ceil_long(x / 2);
    result.entries.push_back({"OPT1", opt_low, pool_cost(n, C, L, opt_low), true});
    if (opt_high != opt_low)
        result.entries.push_back({"OPT2", opt_high, pool_cost(n, C, L, opt_high), true});

    for (const auto& entry : result.entries) {
        if (!entry.exists && entry.label.rfind("OPT", 0) != 0)
            result.findings.push_back("candidate " + entry.label + " (k=" +
                                      std::to_string(entry.insecure_count) +
                                      ") fails its exact stability conditions");
    }
    return result;
}

namespace {

/// Social cost of a star profile with an insecure center and k-1 insecure
/// leaves: a single component of size k.
Rational star_pool_cost(NodeId n, const Rational& C, const Rational& L, long k) {
    return pool_cost(n, C, L, k);
}

/// Does an insecure center with `leaves` insecure leaf players strictly
/// prefer to inoculate?
bool star_center_flips(NodeId n, const Rational& x, const Rational& F, CostModel model,
                       long leaves) {
    const Rational n0(leaves);
    if (model == CostModel::Selfish) return n0 + 1 > x;
    if (model == CostModel::Relative) return F * n0 * n0 / Rational(n - 1) + n0 + 1 > x;
    return F * n0 * n0 + n0 + 1 > x;
}

}  // namespace

ClosedFormResult closed_form_star(NodeId n, const Rational& C_in, const Rational& L_in,
                                  const Rational& F_in, CostModel model) {
    const auto [C, L, F] = require_admissible(n, C_in, L_in, F_in);
    ClosedFormResult result;
    const Rational x = C * Rational(n) / L;
    const Rational center_secure_cost = C + Rational(n - 1) * L / Rational(n);
    const Rational f_eff = model == CostModel::Selfish ? Rational(0) : F;

    // Center-insecure candidate with k total insecure players (k-1 leaves).
    auto insecure_center_entry = [&](const std::string& label, const Rational& f, CostModel m,
                                     long k) {
        ClosedFormEntry entry{label, k, star_pool_cost(n, C, L, k), false};
        const long leaves = k - 1;
        bool leaf_ok = k >= 1 && k <= n;
        if (leaf_ok && leaves >= 1 && Rational(leaves) + 1 + f > x) leaf_ok = false;
        if (leaf_ok && leaves <= n - 2 && Rational(leaves) + 2 + f < x) leaf_ok = false;
        const bool center_ok = leaf_ok && !star_center_flips(n, x, f, m, leaves);
        entry.exists = leaf_ok && center_ok;
        if (leaf_ok && !center_ok)
            result.findings.push_back(
                label + " candidate (insecure=" + std::to_string(k) +
                ") satisfies the lemma's leaf conditions but the insecure center strictly "
                "prefers to inoculate; not an equilibrium");
        return entry;
    };

    // Selfish family: the center-secure profile plus the center-insecure pool.
    // The leaf window can land below 1 once shifted by F; the center-alone
    // pool (no insecure leaves, so no insecure-leaf condition) still remains
    // a candidate, hence the clamp.
    result.entries.push_back({"NE1", n - 1, center_secure_cost, true});
    const long ne_low = std::max(1L, ceil_long(x) - 1), ne_high = std::max(1L, floor_long(x));
    result.entries.push_back(insecure_center_entry("NE2", Rational(0), CostModel::Selfish, ne_low));
    if (ne_high != ne_low)
        result.entries.push_back(
            insecure_center_entry("NE3", Rational(0), CostModel::Selfish, ne_high));

    if (model != CostModel::Selfish) {
        result.entries.push_back({"FNE1", n - 1, center_secure_cost, true});
        const long fne_low = std::max(1L, ceil_long(x - f_eff) - 1);
        const long fne_high = std::max(1L, floor_long(x - f_eff));
        result.entries.push_back(insecure_center_entry("FNE2", f_eff, model, fne_low));
        if (fne_high != fne_low)
            result.entries.push_back(insecure_center_entry("FNE3", f_eff, model, fne_high));

        bool bad_fne = false;
        for (const auto& entry : result.entries)
            if (entry.exists && entry.label.rfind("FNE", 0) == 0 && entry.label != "FNE1")
                bad_fne = true;
        result.unique_fne = !bad_fne;

        // Minimal leaf count that makes an insecure center flip, found by
        // direct integer search (monotone in the leaf count).
        for (long leaves = 0; leaves <= n - 1; ++leaves) {
            if (star_center_flips(n, x, f_eff, model, leaves)) {
                result.center_flip_min_leaves = leaves;
                break;
            }
        }

        if (model == CostModel::Absolute && f_eff > 0) {
            // Literal floor/sqrt uniqueness statement, for comparison.
            const double fx = f_eff.get_d(), xx = x.get_d();
            const double root = std::sqrt(1.0 - 4.0 * fx * (1.0 - xx));
            const double literal =
                std::floor(xx - fx) - std::floor((root - 1.0) / (2.0 * fx)) - 2.0;
            const bool literal_unique = literal >= 0.0;
            if (literal_unique != *result.unique_fne)
                result.findings.push_back(
                    "uniqueness decision differs from the literal floor/sqrt expression "
                    "(literal says " +
                    std::string(literal_unique ? "unique" : "not unique") +
                    ", exact integer search says " +
                    std::string(*result.unique_fne ? "unique" : "not unique") + ")");
        }
    }

    result.entries.push_back({"OPT", n - 1, center_secure_cost, true});
    return result;
}

bool characterization_check(const Graph& g, const StrategyProfile& a) {
    if (a.size() != g.node_count()) throw InputError("profile length does not match node count");
    for (NodeId u = 0; u < g.node_count(); ++u) {
        if (!a.secure(u)) {
            for (NodeId v : g.neighbors(u))
                if (!a.secure(v)) return false;  // (a) insecure pair adjacent
        } else {
            bool has_insecure = false;
            for (NodeId v : g.neighbors(u)) {
                if (!a.secure(v)) {
                    has_insecure = true;
                    break;
                }
            }
            if (!has_insecure) return false;  // (b) protected player without exposure
        }
    }
    return true;
}

}  // namespace inoc
