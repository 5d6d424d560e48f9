#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "inoc/dynamics.hpp"
#include "inoc/equilibria.hpp"
#include "inoc/game.hpp"

#include <json.hpp>

namespace inoc {

/// Graph source for experiments and the command line.
struct GraphSpec {
    enum class Kind { Complete, Star, Cycle, Kleinberg, File };

    Kind kind = Kind::Complete;
    NodeId n = 0;                 // Complete / Star / Cycle
    KleinbergParams kleinberg;    // Kleinberg (its seed field is overridden per trial)
    std::string path;             // File

    /// Builds the graph; only Kleinberg instances depend on the seed.
    Graph build(std::uint64_t seed) const;
    bool seeded() const { return kind == Kind::Kleinberg; }
    std::string describe() const;
};

enum class ExperimentKind { SweepF, Convergence, WofExact, NumSec };
ExperimentKind parse_experiment_kind(std::string_view name);
const char* experiment_kind_name(ExperimentKind kind);

struct InitialProfileRule {
    enum class Kind { AllInsecure, AllSecure, Bits };
    Kind kind = Kind::AllInsecure;
    std::string bits;

    static InitialProfileRule parse(std::string_view text);  // all-insecure|all-secure|bits:0101
    std::string to_string() const;
    StrategyProfile build(NodeId n) const;
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::SweepF;
    GraphSpec graph;
    Rational inoculation_cost{1};
    Rational infection_loss{4};
    std::vector<Rational> friendship_grid;
    std::vector<CostModel> models;
    long trials = 1;
    std::uint64_t master_seed = 0;
    Schedule schedule;
    InitialProfileRule init;
    std::string out_csv, out_json;
    long max_passes = -1;
    NodeId enumeration_cap = kDefaultEnumerationCap;
    bool dry_run = false;

    /// Strict parse of the config document: unknown keys are rejected.
    static ExperimentConfig from_json_text(const std::string& text);
    nlohmann::json to_json() const;
};

struct ResultRow {
    std::string experiment;
    long trial = 0;
    std::uint64_t seed = 0;
    std::optional<NodeId> side;
    std::optional<int> q;
    std::optional<double> alpha;
    NodeId n = 0;
    Rational inoculation_cost, infection_loss, friendship_factor;
    CostModel model = CostModel::Selfish;
    bool converged = false;
    long passes = 0, changes = 0;
    Rational social_cost;
    long num_secure = 0;
    std::optional<Rational> wof, poa;
};

/// Seed for one (F index, model index, trial) cell; independent of grid sizes.
std::uint64_t trial_seed(std::uint64_t master, std::size_t f_index, std::size_t model_index,
                         long trial);

/// Runs the whole grid: one row per (F, model, trial), in that order.
/// Deterministic for a fixed config. Non-convergent runs are reported with
/// converged=false, never dropped.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config);

extern const char* const kCsvHeader;
void emit_csv(const std::vector<ResultRow>& rows, std::ostream& out);
void emit_csv_file(const std::vector<ResultRow>& rows, const std::string& path);
std::vector<ResultRow> parse_csv(std::istream& in);

void emit_json(const ExperimentConfig& config, const std::vector<ResultRow>& rows,
               std::ostream& out);
void emit_json_file(const ExperimentConfig& config, const std::vector<ResultRow>& rows,
                    const std::string& path);

nlohmann::json rational_json(const Rational& value);
nlohmann::json trace_json(const GameInstance& inst, const Schedule& schedule,
                          const DynamicsTrace& trace);
nlohmann::json report_json(const EquilibriumReport& report);
nlohmann::json closed_form_json(const ClosedFormResult& result);

}  // namespace inoc
