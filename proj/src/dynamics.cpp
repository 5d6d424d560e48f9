#include "inoc/dynamics.hpp"

#include <algorithm>
#include <numeric>

#include "inoc/errors.hpp"
#include "inoc/rng.hpp"

namespace inoc {

Schedule Schedule::parse(std::string_view text) {
    if (text == "round-robin") return round_robin();
    if (text == "random") return random(0);
    if (text.rfind("fixed:", 0) == 0) {
        std::vector<NodeId> ids;
        std::string_view rest = text.substr(6);
        while (!rest.empty()) {
            auto comma = rest.find(',');
            std::string_view item = rest.substr(0, comma);
            try {
                ids.push_back(static_cast<NodeId>(std::stol(std::string(item))));
            } catch (const std::exception&) {
                throw InputError("bad node id in fixed schedule: '" + std::string(item) + "'");
            }
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
        if (ids.empty()) throw InputError("fixed schedule needs at least one node id");
        return fixed(std::move(ids));
    }
    throw InputError("unknown schedule: '" + std::string(text) +
                     "' (expected round-robin|random|fixed:<ids>)");
}

std::string Schedule::to_string() const {
    switch (kind) {
        case Kind::RoundRobin: return "round-robin";
        case Kind::RandomPerPass: return "random";
        case Kind::Fixed: {
            std::string s = "fixed:";
            for (std::size_t i = 0; i < sequence.size(); ++i) {
                if (i) s += ',';
                s += std::to_string(sequence[i]);
            }
            return s;
        }
    }
    return "?";
}

ThresholdVariant parse_threshold_variant(std::string_view name) {
    if (name == "paper-absolute") return ThresholdVariant::PaperAbsolute;
    if (name == "paper-relative") return ThresholdVariant::PaperRelative;
    if (name == "rederived") return ThresholdVariant::Rederived;
    throw InputError("unknown threshold variant: '" + std::string(name) +
                     "' (expected rederived|paper-absolute|paper-relative)");
}

const char* threshold_variant_name(ThresholdVariant variant) {
    switch (variant) {
        case ThresholdVariant::PaperAbsolute: return "paper-absolute";
        case ThresholdVariant::PaperRelative: return "paper-relative";
        case ThresholdVariant::Rederived: return "rederived";
    }
    return "?";
}

Rational potential_threshold(const GameInstance& inst, ThresholdVariant variant) {
    const Rational& f = inst.effective_friendship();
    if (f == 0) throw InputError("potential threshold undefined for F = 0");
    const Rational cn_over_l =
        inst.inoculation_cost() * Rational(inst.n()) / inst.infection_loss();
    switch (variant) {
        case ThresholdVariant::PaperAbsolute:
            return cn_over_l / f - inst.infection_loss() / f + 1;
        case ThresholdVariant::PaperRelative:
            return 2 * cn_over_l / f - 2 * inst.infection_loss() / f + 1;
        case ThresholdVariant::Rederived:
            // Indifference size of a player between two insecure neighbors.
            if (inst.model() == CostModel::Relative)
                return (2 * cn_over_l - f) / (2 + f);
            return (cn_over_l - f) / (1 + f);
    }
    throw InputError("unknown threshold variant");
}

PotentialConfig PotentialConfig::make(const GameInstance& inst, ThresholdVariant variant) {
    return {variant, potential_threshold(inst, variant)};
}

long cycle_potential(const GameInstance& inst, const StrategyProfile& a,
                     const PotentialConfig& config) {
    if (!is_cycle_graph(inst.graph())) throw InputError("potential is defined on cycle graphs only");
    ComponentView view(inst.graph(), a);
    long phi = 0;
    for (int c = 0; c < view.component_count(); ++c) {
        const long size = view.component_size(c);
        phi += Rational(size) > config.threshold ? size : -size;
    }
    return phi;
}

DynamicsTrace run_dynamics(const GameInstance& inst, const StrategyProfile& initial,
                           const Schedule& schedule, long max_passes,
                           const PotentialConfig* record_potential) {
    const NodeId n = inst.n();
    if (initial.size() != n) throw InputError("initial profile length does not match node count");
    if (max_passes < 0) max_passes = 100L * n;
    if (max_passes < 1) throw InputError("max_passes must be >= 1");
    if (schedule.kind == Schedule::Kind::Fixed) {
        std::vector<char> offered(n, 0);
        for (NodeId id : schedule.sequence) {
            if (id < 0 || id >= n)
                throw InputError("fixed schedule id out of range: " + std::to_string(id));
            offered[id] = 1;
        }
        // A pass with no changes certifies an equilibrium only if everyone
        // was offered a move.
        for (NodeId id = 0; id < n; ++id)
            if (!offered[id])
                throw InputError("fixed schedule never offers node " + std::to_string(id));
    }

    DynamicsTrace trace;
    trace.initial = initial;
    StrategyProfile profile = initial;
    DeviationOracle oracle(inst);
    std::mt19937_64 schedule_rng(schedule.seed);
    std::vector<NodeId> order(n);
    std::iota(order.begin(), order.end(), 0);

    if (record_potential) trace.phi_initial = cycle_potential(inst, profile, *record_potential);

    for (long pass = 1; pass <= max_passes; ++pass) {
        if (schedule.kind == Schedule::Kind::RandomPerPass) {
            for (NodeId i = n - 1; i > 0; --i)
                std::swap(order[i], order[uniform_below(schedule_rng, i + 1)]);
        }
        const auto& sweep = schedule.kind == Schedule::Kind::Fixed ? schedule.sequence : order;

        long changes_this_pass = 0;
        for (NodeId i : sweep) {
            if (!oracle.flip_improves(profile, i)) continue;
            ChangeEvent event;
            event.pass = pass;
            event.node = i;
            event.to_secure = !profile.secure(i);
            for (NodeId j : inst.graph().neighbors(i))
                if (!profile.secure(j)) ++event.insecure_neighbors;
            event.perceived_before = perceived_cost(inst, profile, i);
            profile.set(i, event.to_secure);
            event.perceived_after = perceived_cost(inst, profile, i);
            if (record_potential)
                event.phi = cycle_potential(inst, profile, *record_potential);
            trace.events.push_back(std::move(event));
            ++changes_this_pass;
        }
        trace.passes = pass;
        if (changes_this_pass == 0) {
            trace.converged = true;
            break;
        }
    }

    trace.final_profile = std::move(profile);
    trace.changes = static_cast<long>(trace.events.size());
    return trace;
}

ConvergenceStats convergence_stats(const DynamicsTrace& trace) {
    return {trace.passes, trace.changes, trace.converged};
}

PotentialAuditResult audit_potential(const DynamicsTrace& trace) {
    PotentialAuditResult result;
    if (!trace.phi_initial) {
        result.ok = false;
        result.notes.push_back("trace carries no potential samples");
        return result;
    }
    long previous_phi = *trace.phi_initial;
    for (const ChangeEvent& event : trace.events) {
        const long phi = event.phi.value_or(previous_phi);
        const long delta = phi - previous_phi;
        previous_phi = phi;
        if (event.pass <= 2) continue;

        const bool interior = event.insecure_neighbors == 2;
        if (!event.to_secure && interior) {
            ++result.case_a;
            if (delta > -1) {
                ++result.violations;
                result.notes.push_back("case A at pass " + std::to_string(event.pass) + " node " +
                                       std::to_string(event.node) + " changed phi by " +
                                       std::to_string(delta));
            }
        } else if (!event.to_secure) {
            ++result.case_b;
            if (delta > 1) {
                ++result.violations;
                result.notes.push_back("case B at pass " + std::to_string(event.pass) + " node " +
                                       std::to_string(event.node) + " changed phi by " +
                                       std::to_string(delta));
            }
        } else if (interior) {
            ++result.case_c;
            if (delta > -1) {
                ++result.violations;
                result.notes.push_back("case C at pass " + std::to_string(event.pass) + " node " +
                                       std::to_string(event.node) + " changed phi by " +
                                       std::to_string(delta));
            }
        } else {
            // Insecure player with a secure neighbor turning secure; the
            // two-pass structure argument says this should not happen.
            ++result.case_other;
            result.notes.push_back("unexpected protect move at pass " + std::to_string(event.pass) +
                                   " node " + std::to_string(event.node));
        }
    }
    result.ok = result.violations == 0;
    return result;
}

}  // namespace inoc
