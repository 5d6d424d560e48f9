#include "inoc/cli.hpp"

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "inoc/errors.hpp"
#include "inoc/harness.hpp"
#include "inoc/rng.hpp"

namespace inoc {

namespace {

struct GraphOptions {
    std::string file;
    NodeId complete = 0, star = 0, cycle = 0;
    std::string kleinberg;
    std::uint64_t seed = 0;

    void add(CLI::App* cmd) {
        cmd->add_option("--graph", file, "load a graph from an edge-list file");
        cmd->add_option("--complete", complete, "complete graph on N nodes");
        cmd->add_option("--star", star, "star graph on N nodes (node 0 is the center)");
        cmd->add_option("--cycle", cycle, "cycle graph on N nodes");
        cmd->add_option("--kleinberg", kleinberg, "small-world grid SIDE,Q,ALPHA");
        cmd->add_option("--seed", seed, "seed for randomized construction and schedules");
    }

    GraphSpec spec() const {
        int sources = !file.empty();
        sources += complete > 0;
        sources += star > 0;
        sources += cycle > 0;
        sources += !kleinberg.empty();
        if (sources != 1)
            throw CLI::RequiredError(
                "exactly one of --graph/--complete/--star/--cycle/--kleinberg");
        GraphSpec spec;
        if (!file.empty()) {
            spec.kind = GraphSpec::Kind::File;
            spec.path = file;
        } else if (complete > 0) {
            spec.kind = GraphSpec::Kind::Complete;
            spec.n = complete;
        } else if (star > 0) {
            spec.kind = GraphSpec::Kind::Star;
            spec.n = star;
        } else if (cycle > 0) {
            spec.kind = GraphSpec::Kind::Cycle;
            spec.n = cycle;
        } else {
            spec.kind = GraphSpec::Kind::Kleinberg;
            std::istringstream ss(kleinberg);
            char c1 = 0, c2 = 0;
            if (!(ss >> spec.kleinberg.side >> c1 >> spec.kleinberg.long_range_per_node >> c2 >>
                  spec.kleinberg.clustering_exponent) ||
                c1 != ',' || c2 != ',')
                throw InputError("--kleinberg expects SIDE,Q,ALPHA (got '" + kleinberg + "')");
        }
        return spec;
    }

    Graph build() const { return spec().build(seed); }
};

struct GameOptions {
    std::string C = "1", L = "1", F = "0", model = "absolute";

    void add(CLI::App* cmd) {
        cmd->add_option("--C", C, "inoculation cost, rational (e.g. 13/32 or 0.40625)");
        cmd->add_option("--L", L, "infection loss, rational");
        cmd->add_option("--F", F, "friendship factor in [0,1], rational");
        cmd->add_option("--model", model, "cost model: selfish|absolute|relative");
    }

    GameInstance instance(Graph graph) const {
        return GameInstance(std::move(graph), parse_rational(C), parse_rational(L),
                            parse_rational(F), parse_model(model));
    }
};

void write_text(const std::string& text, const std::string& path, std::ostream& fallback) {
    if (path.empty()) {
        fallback << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write output file: " + path);
    out << text;
    if (!out) throw InputError("error while writing output file: " + path);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"virus inoculation game on social networks: exact costs, equilibria, dynamics"};
    app.require_subcommand(1);
    int status = 0;

    // gen
    auto* gen = app.add_subcommand("gen", "generate a graph and write it as an edge list");
    auto gen_graph = std::make_shared<GraphOptions>();
    auto gen_out = std::make_shared<std::string>();
    gen_graph->add(gen);
    gen->add_option("--out", *gen_out, "output path (default: stdout)");
    gen->callback([&, gen_graph, gen_out] {
        std::ostringstream text;
        save_edge_list(gen_graph->build(), text);
        write_text(text.str(), *gen_out, out);
    });

    // cost
    auto* cost = app.add_subcommand("cost", "print actual, perceived and social costs");
    auto cost_graph = std::make_shared<GraphOptions>();
    auto cost_game = std::make_shared<GameOptions>();
    auto cost_init = std::make_shared<std::string>("all-insecure");
    auto cost_out = std::make_shared<std::string>();
    cost_graph->add(cost);
    cost_game->add(cost);
    cost->add_option("--init", *cost_init, "profile: all-insecure|all-secure|bits:<01-string>");
    cost->add_option("--out", *cost_out, "output path (default: stdout)");
    cost->callback([&, cost_graph, cost_game, cost_init, cost_out] {
        GameInstance inst = cost_game->instance(cost_graph->build());
        StrategyProfile profile = InitialProfileRule::parse(*cost_init).build(inst.n());
        CostReport report = cost_report(inst, profile);
        nlohmann::json doc;
        doc["profile"] = profile.to_string();
        nlohmann::json actual = nlohmann::json::array(), perceived = nlohmann::json::array();
        for (const auto& c : report.actual) actual.push_back(rational_json(c));
        for (const auto& c : report.perceived) perceived.push_back(rational_json(c));
        doc["actual"] = actual;
        doc["perceived"] = perceived;
        doc["social"] = rational_json(report.social);
        write_text(doc.dump(2) + "\n", *cost_out, out);
    });

    // dynamics
    auto* dynamics = app.add_subcommand("dynamics", "run best-response dynamics, emit the trace");
    auto dyn_graph = std::make_shared<GraphOptions>();
    auto dyn_game = std::make_shared<GameOptions>();
    auto dyn_init = std::make_shared<std::string>("all-insecure");
    auto dyn_schedule = std::make_shared<std::string>("round-robin");
    auto dyn_out = std::make_shared<std::string>();
    auto dyn_max_passes = std::make_shared<long>(-1);
    auto dyn_potential = std::make_shared<bool>(false);
    auto dyn_variant = std::make_shared<std::string>("rederived");
    dyn_graph->add(dynamics);
    dyn_game->add(dynamics);
    dynamics->add_option("--init", *dyn_init, "initial profile rule");
    dynamics->add_option("--schedule", *dyn_schedule, "round-robin|random|fixed:<ids>");
    dynamics->add_option("--max-passes", *dyn_max_passes, "pass budget (default 100*n)");
    dynamics->add_flag("--potential", *dyn_potential, "record the cycle potential per event");
    dynamics->add_option("--variant", *dyn_variant,
                         "potential threshold: rederived|paper-absolute|paper-relative");
    dynamics->add_option("--out", *dyn_out, "output path (default: stdout)");
    dynamics->callback([&, dyn_graph, dyn_game, dyn_init, dyn_schedule, dyn_out, dyn_max_passes,
                        dyn_potential, dyn_variant] {
        GameInstance inst = dyn_game->instance(dyn_graph->build());
        Schedule schedule = Schedule::parse(*dyn_schedule);
        if (schedule.kind == Schedule::Kind::RandomPerPass)
            schedule.seed = derive_seed(dyn_graph->seed, {0x5eedu});
        StrategyProfile initial = InitialProfileRule::parse(*dyn_init).build(inst.n());
        std::unique_ptr<PotentialConfig> potential;
        if (*dyn_potential)
            potential = std::make_unique<PotentialConfig>(
                PotentialConfig::make(inst, parse_threshold_variant(*dyn_variant)));
        DynamicsTrace trace =
            run_dynamics(inst, initial, schedule, *dyn_max_passes, potential.get());
        write_text(trace_json(inst, schedule, trace).dump(2) + "\n", *dyn_out, out);
    });

    // enum
    auto* enumerate = app.add_subcommand("enum", "enumerate all pure equilibria exhaustively");
    auto enum_graph = std::make_shared<GraphOptions>();
    auto enum_game = std::make_shared<GameOptions>();
    auto enum_cap = std::make_shared<NodeId>(kDefaultEnumerationCap);
    auto enum_out = std::make_shared<std::string>();
    enum_graph->add(enumerate);
    enum_game->add(enumerate);
    enumerate->add_option("--cap", *enum_cap, "exhaustive-search node cap");
    enumerate->add_option("--out", *enum_out, "output path (default: stdout)");
    enumerate->callback([&, enum_graph, enum_game, enum_cap, enum_out] {
        GameInstance inst = enum_game->instance(enum_graph->build());
        write_text(report_json(full_report(inst, *enum_cap)).dump(2) + "\n", *enum_out, out);
    });

    // closed-form
    auto* closed = app.add_subcommand("closed-form", "complete/star equilibrium calculators");
    auto closed_graph = std::make_shared<GraphOptions>();
    auto closed_game = std::make_shared<GameOptions>();
    closed_graph->add(closed);
    closed_game->add(closed);
    closed->callback([&, closed_graph, closed_game] {
        GraphSpec spec = closed_graph->spec();
        const Rational C = parse_rational(closed_game->C), L = parse_rational(closed_game->L),
                       F = parse_rational(closed_game->F);
        const CostModel model = parse_model(closed_game->model);
        ClosedFormResult result;
        if (spec.kind == GraphSpec::Kind::Complete)
            result = closed_form_complete(spec.n, C, L, F);
        else if (spec.kind == GraphSpec::Kind::Star)
            result = closed_form_star(spec.n, C, L, F, model);
        else
            throw InputError("closed-form supports --complete and --star only");
        for (const auto& entry : result.entries)
            out << entry.label << " insecure=" << entry.insecure_count
                << " cost=" << fraction_string(entry.cost) << " ("
                << decimal_string(entry.cost) << ") exists=" << (entry.exists ? "yes" : "no")
                << "\n";
        if (result.unique_fne)
            out << "unique FNE: " << (*result.unique_fne ? "yes" : "no") << "\n";
        if (result.center_flip_min_leaves)
            out << "insecure center flips from " << *result.center_flip_min_leaves
                << " insecure leaves on\n";
        for (const auto& finding : result.findings) out << "finding: " << finding << "\n";
    });

    // wof / poa
    for (bool is_wof : {true, false}) {
        auto* cmd = is_wof ? app.add_subcommand(
                                 "wof", "worst selfish cost over worst friendship cost, exact")
                           : app.add_subcommand("poa", "worst selfish cost over optimum, exact");
        auto cmd_graph = std::make_shared<GraphOptions>();
        auto cmd_game = std::make_shared<GameOptions>();
        auto cmd_cap = std::make_shared<NodeId>(kDefaultEnumerationCap);
        cmd_graph->add(cmd);
        cmd_game->add(cmd);
        cmd->add_option("--cap", *cmd_cap, "exhaustive-search node cap");
        cmd->callback([&, cmd_graph, cmd_game, cmd_cap, is_wof] {
            GameInstance inst = cmd_game->instance(cmd_graph->build());
            auto value = is_wof ? wof(inst, *cmd_cap) : price_of_anarchy(inst, *cmd_cap);
            if (value)
                out << fraction_string(*value) << "\n";
            else
                out << "undefined\n";
        });
    }

    // check
    auto* check = app.add_subcommand("check",
                                     "verify a profile: equilibrium and the secure/insecure "
                                     "structure conditions");
    auto check_graph = std::make_shared<GraphOptions>();
    auto check_game = std::make_shared<GameOptions>();
    auto check_init = std::make_shared<std::string>();
    check_graph->add(check);
    check_game->add(check);
    check->add_option("--init", *check_init, "profile to verify, bits:<01-string>")->required();
    check->callback([&, check_graph, check_game, check_init] {
        GameInstance inst = check_game->instance(check_graph->build());
        StrategyProfile profile = InitialProfileRule::parse(*check_init).build(inst.n());
        const bool characterized = characterization_check(inst.graph(), profile);
        auto [stable, witness] = is_equilibrium(inst, profile);
        out << "characterization: " << (characterized ? "true" : "false") << "\n";
        out << "equilibrium: " << (stable ? "true" : "false");
        if (witness)
            out << " (node " << witness->node << " prefers "
                << (witness->improving_secure ? "secure" : "insecure") << ")";
        out << "\n";
        status = 0;
    });

    // experiment
    auto* experiment = app.add_subcommand("experiment", "run a config-driven batch, emit CSV/JSON");
    auto exp_config = std::make_shared<std::string>();
    auto exp_dry = std::make_shared<bool>(false);
    auto exp_csv = std::make_shared<std::string>();
    auto exp_json = std::make_shared<std::string>();
    experiment->add_option("--config", *exp_config, "experiment config JSON file")->required();
    experiment->add_flag("--dry-run", *exp_dry, "emit the CSV header only");
    experiment->add_option("--out", *exp_csv, "override the config's CSV output path");
    experiment->add_option("--out-json", *exp_json, "override the config's JSON output path");
    experiment->callback([&, exp_config, exp_dry, exp_csv, exp_json] {
        std::ifstream in(*exp_config);
        if (!in) throw InputError("cannot open config file: " + *exp_config);
        std::ostringstream text;
        text << in.rdbuf();
        ExperimentConfig config = ExperimentConfig::from_json_text(text.str());
        if (*exp_dry) config.dry_run = true;
        if (!exp_csv->empty()) config.out_csv = *exp_csv;
        if (!exp_json->empty()) config.out_json = *exp_json;

        std::vector<ResultRow> rows = run_experiment(config);
        if (config.out_csv.empty() && config.out_json.empty()) {
            emit_csv(rows, out);
        } else {
            if (!config.out_csv.empty()) emit_csv_file(rows, config.out_csv);
            if (!config.out_json.empty()) emit_json_file(config, rows, config.out_json);
        }
        err << rows.size() << " rows\n";
    });

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("inoc");
    for (const auto& arg : args) argv.push_back(arg.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        err << app.help();
        return 2;
    } catch (const CapExceeded& e) {
        err << "error: " << e.what() << "\n";
        return 4;
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return status;
}

}  // namespace inoc
