#include "inoc/harness.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "inoc/errors.hpp"
#include "inoc/rng.hpp"

namespace inoc {

using nlohmann::json;

Graph GraphSpec::build(std::uint64_t seed) const {
    switch (kind) {
        case Kind::Complete: return make_complete(n);
        case Kind::Star: return make_star(n);
        case Kind::Cycle: return make_cycle(n);
        case Kind::Kleinberg: {
            KleinbergParams params = kleinberg;
            params.seed = seed;
            return make_kleinberg(params);
        }
        case Kind::File: return load_edge_list_file(path);
    }
    throw InputError("unknown graph kind");
}

std::string GraphSpec::describe() const {
    switch (kind) {
        case Kind::Complete: return "complete:" + std::to_string(n);
        case Kind::Star: return "star:" + std::to_string(n);
        case Kind::Cycle: return "cycle:" + std::to_string(n);
        case Kind::Kleinberg: {
            char alpha[32];
            std::snprintf(alpha, sizeof alpha, "%g", kleinberg.clustering_exponent);
            return "kleinberg:side=" + std::to_string(kleinberg.side) +
                   ",q=" + std::to_string(kleinberg.long_range_per_node) + ",alpha=" + alpha;
        }
        case Kind::File: return "file:" + path;
    }
    return "?";
}

ExperimentKind parse_experiment_kind(std::string_view name) {
    if (name == "sweep_F") return ExperimentKind::SweepF;
    if (name == "convergence") return ExperimentKind::Convergence;
    if (name == "wof_exact") return ExperimentKind::WofExact;
    if (name == "numsec") return ExperimentKind::NumSec;
    throw InputError("unknown experiment kind: '" + std::string(name) +
                     "' (expected sweep_F|convergence|wof_exact|numsec)");
}

const char* experiment_kind_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::SweepF: return "sweep_F";
        case ExperimentKind::Convergence: return "convergence";
        case ExperimentKind::WofExact: return "wof_exact";
        case ExperimentKind::NumSec: return "numsec";
    }
    return "?";
}

InitialProfileRule InitialProfileRule::parse(std::string_view text) {
    if (text == "all-insecure") return {Kind::AllInsecure, ""};
    if (text == "all-secure") return {Kind::AllSecure, ""};
    if (text.rfind("bits:", 0) == 0) {
        InitialProfileRule rule{Kind::Bits, std::string(text.substr(5))};
        StrategyProfile::from_string(rule.bits);  // validate characters now
        return rule;
    }
    throw InputError("unknown initial profile rule: '" + std::string(text) +
                     "' (expected all-insecure|all-secure|bits:<01-string>)");
}

std::string InitialProfileRule::to_string() const {
    switch (kind) {
        case Kind::AllInsecure: return "all-insecure";
        case Kind::AllSecure: return "all-secure";
        case Kind::Bits: return "bits:" + bits;
    }
    return "?";
}

StrategyProfile InitialProfileRule::build(NodeId n) const {
    switch (kind) {
        case Kind::AllInsecure: return StrategyProfile::all_insecure(n);
        case Kind::AllSecure: return StrategyProfile::all_secure(n);
        case Kind::Bits: {
            StrategyProfile p = StrategyProfile::from_string(bits);
            if (p.size() != n)
                throw InputError("initial profile has " + std::to_string(p.size()) +
                                 " bits, graph has " + std::to_string(n) + " nodes");
            return p;
        }
    }
    throw InputError("unknown initial profile rule");
}

namespace {

void reject_unknown_keys(const json& object, std::initializer_list<const char*> allowed,
                         const std::string& where) {
    for (const auto& item : object.items()) {
        if (std::find_if(allowed.begin(), allowed.end(), [&](const char* key) {
                return item.key() == key;
            }) == allowed.end())
            throw InputError("unknown key '" + item.key() + "' in " + where);
    }
}

Rational rational_from_json(const json& value, const std::string& where) {
    if (value.is_number_integer()) return Rational(static_cast<long>(value.get<long long>()));
    if (value.is_string()) return parse_rational(value.get<std::string>());
    throw InputError(where + " must be an integer or a string like \"13/32\" or \"0.25\"");
}

GraphSpec graph_spec_from_json(const json& value) {
    if (!value.is_object()) throw InputError("graph must be an object");
    if (!value.contains("generator")) throw InputError("graph needs a 'generator' key");
    const std::string generator = value.at("generator").get<std::string>();
    GraphSpec spec;
    if (generator == "complete" || generator == "star" || generator == "cycle") {
        reject_unknown_keys(value, {"generator", "n"}, "graph");
        spec.kind = generator == "complete" ? GraphSpec::Kind::Complete
                    : generator == "star"   ? GraphSpec::Kind::Star
                                            : GraphSpec::Kind::Cycle;
        spec.n = value.at("n").get<NodeId>();
    } else if (generator == "kleinberg") {
        reject_unknown_keys(value, {"generator", "side", "q", "alpha", "torus"}, "graph");
        spec.kind = GraphSpec::Kind::Kleinberg;
        spec.kleinberg.side = value.at("side").get<NodeId>();
        if (value.contains("q")) spec.kleinberg.long_range_per_node = value.at("q").get<int>();
        if (value.contains("alpha"))
            spec.kleinberg.clustering_exponent = value.at("alpha").get<double>();
        if (value.contains("torus")) spec.kleinberg.torus = value.at("torus").get<bool>();
    } else if (generator == "file") {
        reject_unknown_keys(value, {"generator", "path"}, "graph");
        spec.kind = GraphSpec::Kind::File;
        spec.path = value.at("path").get<std::string>();
    } else {
        throw InputError("unknown graph generator: '" + generator + "'");
    }
    return spec;
}

json graph_spec_to_json(const GraphSpec& spec) {
    json out;
    switch (spec.kind) {
        case GraphSpec::Kind::Complete: out["generator"] = "complete"; out["n"] = spec.n; break;
        case GraphSpec::Kind::Star: out["generator"] = "star"; out["n"] = spec.n; break;
        case GraphSpec::Kind::Cycle: out["generator"] = "cycle"; out["n"] = spec.n; break;
        case GraphSpec::Kind::Kleinberg:
            out["generator"] = "kleinberg";
            out["side"] = spec.kleinberg.side;
            out["q"] = spec.kleinberg.long_range_per_node;
            out["alpha"] = spec.kleinberg.clustering_exponent;
            out["torus"] = spec.kleinberg.torus;
            break;
        case GraphSpec::Kind::File: out["generator"] = "file"; out["path"] = spec.path; break;
    }
    return out;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw InputError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw InputError("config must be a JSON object");
    reject_unknown_keys(doc,
                        {"experiment", "graph", "C", "L", "F_grid", "models", "trials", "seed",
                         "schedule", "init", "out_csv", "out_json", "max_passes", "cap", "dry_run"},
                        "config");

    ExperimentConfig config;
    try {
        config.kind = parse_experiment_kind(doc.at("experiment").get<std::string>());
        config.graph = graph_spec_from_json(doc.at("graph"));
        config.inoculation_cost = rational_from_json(doc.at("C"), "C");
        config.infection_loss = rational_from_json(doc.at("L"), "L");
        for (const auto& f : doc.at("F_grid"))
            config.friendship_grid.push_back(rational_from_json(f, "F_grid entry"));
        for (const auto& m : doc.at("models"))
            config.models.push_back(parse_model(m.get<std::string>()));
        if (doc.contains("trials")) config.trials = doc.at("trials").get<long>();
        if (doc.contains("seed")) config.master_seed = doc.at("seed").get<std::uint64_t>();
        if (doc.contains("schedule"))
            config.schedule = Schedule::parse(doc.at("schedule").get<std::string>());
        if (doc.contains("init"))
            config.init = InitialProfileRule::parse(doc.at("init").get<std::string>());
        if (doc.contains("out_csv")) config.out_csv = doc.at("out_csv").get<std::string>();
        if (doc.contains("out_json")) config.out_json = doc.at("out_json").get<std::string>();
        if (doc.contains("max_passes")) config.max_passes = doc.at("max_passes").get<long>();
        if (doc.contains("cap")) config.enumeration_cap = doc.at("cap").get<NodeId>();
        if (doc.contains("dry_run")) config.dry_run = doc.at("dry_run").get<bool>();
    } catch (const json::exception& e) {
        throw InputError(std::string("bad config value: ") + e.what());
    }
    if (config.friendship_grid.empty()) throw InputError("F_grid must not be empty");
    if (config.models.empty()) throw InputError("models must not be empty");
    if (!config.dry_run && config.trials < 1) throw InputError("trials must be >= 1");
    return config;
}

json ExperimentConfig::to_json() const {
    json out;
    out["experiment"] = experiment_kind_name(kind);
    out["graph"] = graph_spec_to_json(graph);
    out["C"] = fraction_string(inoculation_cost);
    out["L"] = fraction_string(infection_loss);
    json grid = json::array();
    for (const auto& f : friendship_grid) grid.push_back(fraction_string(f));
    out["F_grid"] = grid;
    json model_list = json::array();
    for (CostModel m : models) model_list.push_back(model_name(m));
    out["models"] = model_list;
    out["trials"] = trials;
    out["seed"] = master_seed;
    out["schedule"] = schedule.to_string();
    out["init"] = init.to_string();
    if (!out_csv.empty()) out["out_csv"] = out_csv;
    if (!out_json.empty()) out["out_json"] = out_json;
    if (max_passes >= 0) out["max_passes"] = max_passes;
    out["cap"] = enumeration_cap;
    if (dry_run) out["dry_run"] = true;
    return out;
}

std::uint64_t trial_seed(std::uint64_t master, std::size_t f_index, std::size_t model_index,
                         long trial) {
    return derive_seed(master, {static_cast<std::uint64_t>(f_index) + 1,
                                static_cast<std::uint64_t>(model_index) + 1,
                                static_cast<std::uint64_t>(trial) + 1});
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& config) {
    std::vector<ResultRow> rows;
    if (config.dry_run) return rows;

    std::shared_ptr<const Graph> fixed_graph;
    if (!config.graph.seeded())
        fixed_graph = std::make_shared<const Graph>(config.graph.build(0));

    for (std::size_t f_idx = 0; f_idx < config.friendship_grid.size(); ++f_idx) {
        const Rational& f = config.friendship_grid[f_idx];
        for (std::size_t m_idx = 0; m_idx < config.models.size(); ++m_idx) {
            const CostModel model = config.models[m_idx];
            for (long trial = 0; trial < config.trials; ++trial) {
                const std::uint64_t seed = trial_seed(config.master_seed, f_idx, m_idx, trial);
                std::shared_ptr<const Graph> graph = fixed_graph;
                if (!graph) graph = std::make_shared<const Graph>(config.graph.build(seed));

                GameInstance inst(graph, config.inoculation_cost, config.infection_loss, f, model);
                Schedule schedule = config.schedule;
                if (schedule.kind == Schedule::Kind::RandomPerPass)
                    schedule.seed = derive_seed(seed, {0x5eedu});
                const StrategyProfile initial = config.init.build(inst.n());
                const DynamicsTrace trace =
                    run_dynamics(inst, initial, schedule, config.max_passes);

                ResultRow row;
                row.experiment = experiment_kind_name(config.kind);
                row.trial = trial;
                row.seed = seed;
                if (config.graph.kind == GraphSpec::Kind::Kleinberg) {
                    row.side = config.graph.kleinberg.side;
                    row.q = config.graph.kleinberg.long_range_per_node;
                    row.alpha = config.graph.kleinberg.clustering_exponent;
                }
                row.n = inst.n();
                row.inoculation_cost = config.inoculation_cost;
                row.infection_loss = config.infection_loss;
                row.friendship_factor = f;
                row.model = model;
                row.converged = trace.converged;
                row.passes = trace.passes;
                row.changes = trace.changes;
                row.social_cost = social_cost(inst, trace.final_profile);
                row.num_secure = trace.final_profile.secure_count();
                if (config.kind == ExperimentKind::WofExact) {
                    row.wof = wof(inst, config.enumeration_cap);
                    row.poa = price_of_anarchy(inst, config.enumeration_cap);
                }
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

const char* const kCsvHeader =
    "experiment,trial,seed,side,q,alpha,n,C,L,F,model,converged,passes,changes,social_cost,"
    "num_secure,wof,poa";

namespace {

std::string double_string(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

}  // namespace

void emit_csv(const std::vector<ResultRow>& rows, std::ostream& out) {
    out << kCsvHeader << "\n";
    for (const ResultRow& row : rows) {
        out << row.experiment << ',' << row.trial << ',' << row.seed << ',';
        if (row.side) out << *row.side;
        out << ',';
        if (row.q) out << *row.q;
        out << ',';
        if (row.alpha) out << double_string(*row.alpha);
        out << ',' << row.n << ',' << decimal_string(row.inoculation_cost) << ','
            << decimal_string(row.infection_loss) << ',' << decimal_string(row.friendship_factor)
            << ',' << model_name(row.model) << ',' << (row.converged ? "true" : "false") << ','
            << row.passes << ',' << row.changes << ',' << decimal_string(row.social_cost) << ','
            << row.num_secure << ',';
        if (row.wof) out << decimal_string(*row.wof);
        out << ',';
        if (row.poa) out << decimal_string(*row.poa);
        out << "\n";
    }
}

void emit_csv_file(const std::vector<ResultRow>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write CSV file: " + path);
    emit_csv(rows, out);
    if (!out) throw InputError("error while writing CSV file: " + path);
}

std::vector<ResultRow> parse_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw InputError("CSV is empty");
    if (line != kCsvHeader) throw InputError("unexpected CSV header: " + line);

    std::vector<ResultRow> rows;
    long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::string::size_type start = 0;
        while (true) {
            auto comma = line.find(',', start);
            fields.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (fields.size() != 18)
            throw InputError("CSV line " + std::to_string(line_no) + ": expected 18 fields, got " +
                             std::to_string(fields.size()));
        ResultRow row;
        try {
            row.experiment = fields[0];
            row.trial = std::stol(fields[1]);
            row.seed = std::stoull(fields[2]);
            if (!fields[3].empty()) row.side = static_cast<NodeId>(std::stol(fields[3]));
            if (!fields[4].empty()) row.q = static_cast<int>(std::stol(fields[4]));
            if (!fields[5].empty()) row.alpha = std::stod(fields[5]);
            row.n = static_cast<NodeId>(std::stol(fields[6]));
            row.inoculation_cost = parse_rational(fields[7]);
            row.infection_loss = parse_rational(fields[8]);
            row.friendship_factor = parse_rational(fields[9]);
            row.model = parse_model(fields[10]);
            if (fields[11] != "true" && fields[11] != "false")
                throw InputError("bad converged flag: " + fields[11]);
            row.converged = fields[11] == "true";
            row.passes = std::stol(fields[12]);
            row.changes = std::stol(fields[13]);
            row.social_cost = parse_rational(fields[14]);
            row.num_secure = std::stol(fields[15]);
            if (!fields[16].empty()) row.wof = parse_rational(fields[16]);
            if (!fields[17].empty()) row.poa = parse_rational(fields[17]);
        } catch (const std::exception& e) {
            throw InputError("CSV line " + std::to_string(line_no) + ": " + e.what());
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

nlohmann::json rational_json(const Rational& value) {
    json out;
    out["fraction"] = fraction_string(value);
    out["decimal"] = value.get_d();
    return out;
}

namespace {

json row_json(const ResultRow& row) {
    json out;
    out["experiment"] = row.experiment;
    out["trial"] = row.trial;
    out["seed"] = row.seed;
    if (row.side) out["side"] = *row.side;
    if (row.q) out["q"] = *row.q;
    if (row.alpha) out["alpha"] = *row.alpha;
    out["n"] = row.n;
    out["C"] = rational_json(row.inoculation_cost);
    out["L"] = rational_json(row.infection_loss);
    out["F"] = rational_json(row.friendship_factor);
    out["model"] = model_name(row.model);
    out["converged"] = row.converged;
    out["passes"] = row.passes;
    out["changes"] = row.changes;
    out["social_cost"] = rational_json(row.social_cost);
    out["num_secure"] = row.num_secure;
    if (row.wof) out["wof"] = rational_json(*row.wof);
    if (row.poa) out["poa"] = rational_json(*row.poa);
    return out;
}

}  // namespace

void emit_json(const ExperimentConfig& config, const std::vector<ResultRow>& rows,
               std::ostream& out) {
    json doc;
    doc["config"] = config.to_json();
    json row_list = json::array();
    for (const ResultRow& row : rows) row_list.push_back(row_json(row));
    doc["rows"] = row_list;
    out << doc.dump(2) << "\n";
}

void emit_json_file(const ExperimentConfig& config, const std::vector<ResultRow>& rows,
                    const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write JSON file: " + path);
    emit_json(config, rows, out);
    if (!out) throw InputError("error while writing JSON file: " + path);
}

nlohmann::json trace_json(const GameInstance& inst, const Schedule& schedule,
                          const DynamicsTrace& trace) {
    json doc;
    doc["instance"] = {{"n", inst.n()},
                       {"C", rational_json(inst.inoculation_cost())},
                       {"L", rational_json(inst.infection_loss())},
                       {"F", rational_json(inst.friendship_factor())},
                       {"model", model_name(inst.model())}};
    doc["schedule"] = schedule.to_string();
    json events = json::array();
    for (const ChangeEvent& event : trace.events) {
        json e;
        e["pass"] = event.pass;
        e["node"] = event.node;
        e["from"] = event.to_secure ? 0 : 1;
        e["to"] = event.to_secure ? 1 : 0;
        if (event.phi) e["phi"] = *event.phi;
        events.push_back(std::move(e));
    }
    doc["events"] = events;
    doc["initial"] = trace.initial.to_string();
    doc["final"] = trace.final_profile.to_string();
    doc["converged"] = trace.converged;
    doc["passes"] = trace.passes;
    doc["changes"] = trace.changes;
    return doc;
}

nlohmann::json report_json(const EquilibriumReport& report) {
    json doc;
    doc["instance"] = report.instance_summary;
    doc["model"] = model_name(report.model);
    doc["F"] = rational_json(report.friendship_factor);
    json list = json::array();
    for (const auto& record : report.equilibria)
        list.push_back({{"profile", record.profile.to_string()}, {"cost", rational_json(record.cost)}});
    doc["equilibria"] = list;
    doc["count"] = report.equilibria.size();
    if (report.best_cost) doc["best_cost"] = rational_json(*report.best_cost);
    if (report.worst_cost) doc["worst_cost"] = rational_json(*report.worst_cost);
    if (report.optimum)
        doc["optimum"] = {{"profile", report.optimum->profile.to_string()},
                          {"cost", rational_json(report.optimum->cost)}};
    if (report.wof) doc["wof"] = rational_json(*report.wof);
    else doc["wof"] = "undefined";
    if (report.poa) doc["poa"] = rational_json(*report.poa);
    if (!report.rejected.empty()) {
        json rejected = json::array();
        for (const auto& item : report.rejected)
            rejected.push_back({{"profile", item.profile.to_string()},
                                {"witness_node", item.witness.node},
                                {"witness_prefers", item.witness.improving_secure ? 1 : 0}});
        doc["rejected"] = rejected;
    }
    return doc;
}

nlohmann::json closed_form_json(const ClosedFormResult& result) {
    json doc;
    json entries = json::array();
    for (const auto& entry : result.entries)
        entries.push_back({{"label", entry.label},
                           {"insecure", entry.insecure_count},
                           {"cost", rational_json(entry.cost)},
                           {"exists", entry.exists}});
    doc["entries"] = entries;
    if (result.unique_fne) doc["unique_fne"] = *result.unique_fne;
    if (result.center_flip_min_leaves) doc["center_flip_min_leaves"] = *result.center_flip_min_leaves;
    if (!result.findings.empty()) doc["findings"] = result.findings;
    return doc;
}

}  // namespace inoc
