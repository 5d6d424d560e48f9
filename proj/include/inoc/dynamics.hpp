#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "inoc/game.hpp"

namespace inoc {

/// Order in which players are offered a best response within each pass.
struct Schedule {
    enum class Kind { RoundRobin, RandomPerPass, Fixed };

    Kind kind = Kind::RoundRobin;
    std::uint64_t seed = 0;          // RandomPerPass
    std::vector<NodeId> sequence;    // Fixed

    static Schedule round_robin() { return {}; }
    static Schedule random(std::uint64_t seed) { return {Kind::RandomPerPass, seed, {}}; }
    static Schedule fixed(std::vector<NodeId> sequence) {
        return {Kind::Fixed, 0, std::move(sequence)};
    }
    /// "round-robin" | "random" | "fixed:3,1,2"
    static Schedule parse(std::string_view text);
    std::string to_string() const;
};

/// Threshold separating "big" from "small" attack components in the cycle
/// potential. The paper's displayed derivation and its stated closed form
/// disagree; both literal formulas and the re-derived solution are selectable.
enum class ThresholdVariant { PaperAbsolute, PaperRelative, Rederived };

ThresholdVariant parse_threshold_variant(std::string_view name);
const char* threshold_variant_name(ThresholdVariant variant);

Rational potential_threshold(const GameInstance& inst, ThresholdVariant variant);

struct PotentialConfig {
    ThresholdVariant variant = ThresholdVariant::Rederived;
    Rational threshold;  // t, derived from the instance; requires F > 0

    static PotentialConfig make(const GameInstance& inst,
                                ThresholdVariant variant = ThresholdVariant::Rederived);
};

/// Phi = sum of sizes of components larger than t minus sum of sizes of the
/// rest. Defined for cycle graphs with F > 0; always within [-n, n].
long cycle_potential(const GameInstance& inst, const StrategyProfile& a,
                     const PotentialConfig& config);

struct ChangeEvent {
    long pass = 0;
    NodeId node = -1;
    bool to_secure = false;
    Rational perceived_before, perceived_after;
    int insecure_neighbors = 0;     // at flip time
    std::optional<long> phi;        // potential after the flip, when recorded
};

struct DynamicsTrace {
    StrategyProfile initial;
    StrategyProfile final_profile;
    std::vector<ChangeEvent> events;
    bool converged = false;
    long passes = 0;    // full schedule sweeps, including the clean one
    long changes = 0;   // total strategy flips (= events.size())
    std::optional<long> phi_initial;
};

/// Offers each scheduled node a best response until a full pass makes no
/// change. max_passes < 0 selects the default of 100 * n passes. Supplying
/// record_potential (cycle graphs, F > 0) attaches a potential sample to
/// every change event.
DynamicsTrace run_dynamics(const GameInstance& inst, const StrategyProfile& initial,
                           const Schedule& schedule, long max_passes = -1,
                           const PotentialConfig* record_potential = nullptr);

struct ConvergenceStats {
    long passes = 0;
    long changes = 0;
    bool converged = false;
};
ConvergenceStats convergence_stats(const DynamicsTrace& trace);

/// Checks the potential case analysis on the events after the first two
/// passes: merges and splits by players between two insecure neighbors must
/// lower the potential, boundary joins may raise it by at most one.
struct PotentialAuditResult {
    bool ok = true;
    long case_a = 0;      // secure -> insecure between two insecure neighbors
    long case_b = 0;      // secure -> insecure with a secure neighbor
    long case_c = 0;      // insecure -> secure between two insecure neighbors
    long case_other = 0;  // insecure -> secure with a secure neighbor
    long violations = 0;
    std::vector<std::string> notes;
};
PotentialAuditResult audit_potential(const DynamicsTrace& trace);

}  // namespace inoc
