#include "inoc/game.hpp"

#include <algorithm>

#include "inoc/errors.hpp"

namespace inoc {

CostModel parse_model(std::string_view name) {
    if (name == "selfish") return CostModel::Selfish;
    if (name == "absolute") return CostModel::Absolute;
    if (name == "relative") return CostModel::Relative;
    throw InputError("unknown cost model: '" + std::string(name) +
                     "' (expected selfish|absolute|relative)");
}

const char* model_name(CostModel model) {
    switch (model) {
        case CostModel::Selfish: return "selfish";
        case CostModel::Absolute: return "absolute";
        case CostModel::Relative: return "relative";
    }
    return "?";
}

GameInstance::GameInstance(Graph graph, Rational inoculation_cost, Rational infection_loss,
                           Rational friendship_factor, CostModel model)
    : GameInstance(std::make_shared<const Graph>(std::move(graph)), std::move(inoculation_cost),
                   std::move(infection_loss), std::move(friendship_factor), model) {}

GameInstance::GameInstance(std::shared_ptr<const Graph> graph, Rational inoculation_cost,
                           Rational infection_loss, Rational friendship_factor, CostModel model)
    : graph_(std::move(graph)),
      inoculation_cost_(std::move(inoculation_cost)),
      infection_loss_(std::move(infection_loss)),
      friendship_factor_(std::move(friendship_factor)),
      model_(model) {
    if (!graph_ || graph_->node_count() < 1) throw InputError("game needs a non-empty graph");
    // Comparisons and the integer kernel rely on canonical num/den pairs.
    inoculation_cost_.canonicalize();
    infection_loss_.canonicalize();
    friendship_factor_.canonicalize();
    const Rational n(graph_->node_count());
    if (inoculation_cost_ * n <= infection_loss_ || inoculation_cost_ > infection_loss_)
        throw InputError("parameters must satisfy L/n < C <= L (got C=" +
                         fraction_string(inoculation_cost_) + ", L=" +
                         fraction_string(infection_loss_) + ", n=" + fraction_string(n) + ")");
    if (friendship_factor_ < 0 || friendship_factor_ > 1)
        throw InputError("friendship factor must lie in [0, 1]");
    if (model_ == CostModel::Relative && graph_->min_degree() == 0)
        throw InputError("relative model is undefined on graphs with isolated nodes");
    effective_friendship_ = model_ == CostModel::Selfish ? Rational(0) : friendship_factor_;
}

GameInstance GameInstance::with_model(CostModel model, Rational friendship_factor) const {
    return GameInstance(graph_, inoculation_cost_, infection_loss_, std::move(friendship_factor),
                        model);
}

std::string GameInstance::summary() const {
    return "n=" + std::to_string(n()) + " C=" + fraction_string(inoculation_cost_) +
           " L=" + fraction_string(infection_loss_) + " F=" + fraction_string(friendship_factor_) +
           " model=" + model_name(model_);
}

Rational actual_cost(const GameInstance& inst, const ComponentView& view, const StrategyProfile& a,
                     NodeId i) {
    if (a.secure(i)) return inst.inoculation_cost();
    return inst.infection_loss() * Rational(view.size_for(i)) / Rational(inst.n());
}

Rational actual_cost(const GameInstance& inst, const StrategyProfile& a, NodeId i) {
    return actual_cost(inst, ComponentView(inst.graph(), a), a, i);
}

Rational perceived_cost(const GameInstance& inst, const ComponentView& view,
                        const StrategyProfile& a, NodeId i) {
    Rational cost = actual_cost(inst, view, a, i);
    const Rational& f = inst.effective_friendship();
    if (f == 0) return cost;
    Rational neighbor_sum(0);
    for (NodeId j : inst.graph().neighbors(i)) neighbor_sum += actual_cost(inst, view, a, j);
    if (inst.model() == CostModel::Relative) {
        const NodeId deg = inst.graph().degree(i);
        if (deg == 0)
            throw InputError("relative perceived cost undefined for isolated node " +
                             std::to_string(i));
        return cost + f * neighbor_sum / Rational(deg);
    }
    return cost + f * neighbor_sum;
}

Rational perceived_cost(const GameInstance& inst, const StrategyProfile& a, NodeId i) {
    return perceived_cost(inst, ComponentView(inst.graph(), a), a, i);
}

Rational social_cost(const GameInstance& inst, const StrategyProfile& a) {
    ComponentView view(inst.graph(), a);
    Rational total(0);
    for (NodeId i = 0; i < inst.n(); ++i) total += actual_cost(inst, view, a, i);
    return total;
}

CostReport cost_report(const GameInstance& inst, const StrategyProfile& a) {
    ComponentView view(inst.graph(), a);
    CostReport report;
    report.social = 0;
    for (NodeId i = 0; i < inst.n(); ++i) {
        report.actual.push_back(actual_cost(inst, view, a, i));
        report.perceived.push_back(perceived_cost(inst, view, a, i));
        report.social += report.actual.back();
    }
    return report;
}

Rational inoculation_threshold(const GameInstance& inst, const StrategyProfile& a, NodeId i) {
    StrategyProfile as_secure = a;
    as_secure.set(i, true);
    ComponentView view(inst.graph(), as_secure);

    Rational f = inst.effective_friendship();
    if (inst.model() == CostModel::Relative) {
        const NodeId deg = inst.graph().degree(i);
        if (deg == 0)
            throw InputError("relative threshold undefined for isolated node " + std::to_string(i));
        f /= Rational(deg);
    }

    long insecure_neighbors = 0;
    Rational neighbor_components(0);
    for (NodeId j : inst.graph().neighbors(i)) {
        if (a.secure(j)) continue;
        ++insecure_neighbors;
        neighbor_components += Rational(view.size_for(j));
    }

    const Rational cn_over_l =
        inst.inoculation_cost() * Rational(inst.n()) / inst.infection_loss();
    return (cn_over_l + f * neighbor_components) / (Rational(1) + f * Rational(insecure_neighbors));
}

BestResponse best_response(const GameInstance& inst, const StrategyProfile& a, NodeId i) {
    DeviationOracle oracle(inst);
    const bool improves = oracle.flip_improves(a, i);
    const bool currently_secure = a.secure(i);
    return {improves ? !currently_secure : currently_secure, improves};
}

namespace {

constexpr long long kMaxParamMagnitude = 1LL << 24;
constexpr NodeId kMaxFastNodes = 1 << 20;

bool fits_fast(const Rational& r, long long& num, long long& den) {
    if (!r.get_num().fits_slong_p() || !r.get_den().fits_slong_p()) return false;
    num = r.get_num().get_si();
    den = r.get_den().get_si();
    return std::llabs(num) <= kMaxParamMagnitude && den <= kMaxParamMagnitude;
}

}  // namespace

DeviationOracle::DeviationOracle(const GameInstance& inst) : inst_(inst) {
    fast_ = inst.n() <= kMaxFastNodes && fits_fast(inst.inoculation_cost(), cn_, cd_) &&
            fits_fast(inst.infection_loss(), ln_, ld_) &&
            fits_fast(inst.effective_friendship(), fn_, fd_);
    const NodeId n = inst.n();
    base_token_.assign(n, 0);
    local_token_.assign(n, 0);
    merge_token_.assign(n, 0);
    base_comp_.assign(n, 0);
    local_comp_.assign(n, 0);
}

// Components of the insecure subgraph for the current profile.
void DeviationOracle::build_components(const StrategyProfile& a) {
    const Graph& g = inst_.graph();
    const NodeId n = g.node_count();
    ++build_gen_;
    base_size_.clear();
    for (NodeId start = 0; start < n; ++start) {
        if (a.secure(start) || base_token_[start] == build_gen_) continue;
        const int c = static_cast<int>(base_size_.size());
        long size = 0;
        stack_.clear();
        stack_.push_back(start);
        base_token_[start] = build_gen_;
        base_comp_[start] = c;
        while (!stack_.empty()) {
            NodeId u = stack_.back();
            stack_.pop_back();
            ++size;
            for (NodeId v : g.neighbors(u)) {
                if (!a.secure(v) && base_token_[v] != build_gen_) {
                    base_token_[v] = build_gen_;
                    base_comp_[v] = c;
                    stack_.push_back(v);
                }
            }
        }
        base_size_.push_back(size);
    }
}

bool DeviationOracle::flip_improves_at(const StrategyProfile& a, NodeId i) {
    const Graph& g = inst_.graph();
    const NodeId n = g.node_count();
    const bool relative = inst_.model() == CostModel::Relative;
    const long dd = relative ? g.degree(i) : 1;
    if (relative && dd == 0)
        throw InputError("relative model undefined for isolated node " + std::to_string(i));

    long g_insecure = 0;
    long lhs_size, s = 0;
    const bool to_insecure = a.secure(i);
    ++check_gen_;
    if (to_insecure) {
        // Flip to insecure: the new component merges the distinct insecure
        // components adjacent to i; s keeps per-neighbor sizes (not deduped).
        long h = 1;
        for (NodeId j : g.neighbors(i)) {
            if (a.secure(j)) continue;
            ++g_insecure;
            const int c = base_comp_[j];
            s += base_size_[c];
            if (merge_token_[c] != check_gen_) {
                merge_token_[c] = check_gen_;
                h += base_size_[c];
            }
        }
        lhs_size = h;
    } else {
        // Flip to secure: only i's own component splits, so re-derive the
        // neighbor components locally with i excluded.
        lhs_size = base_size_[base_comp_[i]];  // k_i
        local_size_.clear();
        for (NodeId j : g.neighbors(i)) {
            if (a.secure(j)) continue;
            ++g_insecure;
            if (local_token_[j] == check_gen_) {
                s += local_size_[local_comp_[j]];
                continue;
            }
            const int c = static_cast<int>(local_size_.size());
            long size = 0;
            stack_.clear();
            stack_.push_back(j);
            local_token_[j] = check_gen_;
            local_comp_[j] = c;
            while (!stack_.empty()) {
                NodeId u = stack_.back();
                stack_.pop_back();
                ++size;
                for (NodeId v : g.neighbors(u)) {
                    if (v == i || a.secure(v) || local_token_[v] == check_gen_) continue;
                    local_token_[v] = check_gen_;
                    local_comp_[v] = c;
                    stack_.push_back(v);
                }
            }
            local_size_.push_back(size);
            s += size;
        }
    }

    // Strict perceived-cost comparison with cleared denominators: the flip
    // side carries lhs_size (hypothetical or current component), the stay
    // side the neighbor component sum.
    if (fast_) {
        const __int128 pool = static_cast<__int128>(ln_) * lhs_size * cd_ *
                              (static_cast<__int128>(fd_) * dd +
                               static_cast<__int128>(fn_) * g_insecure);
        const __int128 inoculate = static_cast<__int128>(cn_) * n * ld_ * fd_ * dd +
                                   static_cast<__int128>(fn_) * ln_ * cd_ * s;
        return to_insecure ? pool < inoculate : inoculate < pool;
    }
    Rational f = inst_.effective_friendship();
    if (relative) f /= Rational(dd);
    const Rational pool = inst_.infection_loss() * Rational(lhs_size) / Rational(n) *
                          (Rational(1) + f * Rational(g_insecure));
    const Rational inoculate =
        inst_.inoculation_cost() + f * inst_.infection_loss() * Rational(s) / Rational(n);
    return to_insecure ? pool < inoculate : inoculate < pool;
}

bool DeviationOracle::flip_improves(const StrategyProfile& a, NodeId i) {
    if (a.size() != inst_.n()) throw InputError("profile length does not match node count");
    build_components(a);
    return flip_improves_at(a, i);
}

std::optional<Witness> DeviationOracle::find_improving(const StrategyProfile& a) {
    if (a.size() != inst_.n()) throw InputError("profile length does not match node count");
    build_components(a);
    for (NodeId i = 0; i < inst_.n(); ++i) {
        if (flip_improves_at(a, i)) return Witness{i, !a.secure(i)};
    }
    return std::nullopt;
}

}  // namespace inoc
