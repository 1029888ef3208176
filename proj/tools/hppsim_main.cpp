#include <algorithm>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hppsim/causal.hpp"
#include "hppsim/serialize.hpp"
#include "hppsim/solvers.hpp"
#include "hppsim/switch_solver.hpp"
#include "hppsim/synthesis.hpp"
#include "hppsim/treespec.hpp"

namespace {

using hppsim::TreePtr;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitPromiseViolated = 2;
constexpr int kExitUnsatisfiable = 3;
constexpr int kExitNonDeterministic = 4;

void emit(std::string text, const std::string& out_path) {
    if (text.empty() || text.back() != '\n') text += '\n';
    if (out_path.empty()) {
        std::cout << text;
    } else {
        hppsim::write_text_file(out_path, text);
    }
}

std::vector<int> parse_labels(const std::string& text) {
    std::vector<int> labels;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        labels.push_back(std::stoi(item));
    }
    return labels;
}

struct InstanceBundle {
    hppsim::HppInstance inst;
    TreePtr tree;  // null when the instance file carries no tree spec
    std::string ref;
};

InstanceBundle load_instance(const std::string& instance_path, const std::string& tree_spec,
                             int max_n) {
    InstanceBundle bundle;
    if (!instance_path.empty()) {
        bundle.inst = hppsim::instance_from_json(json::parse(hppsim::read_text_file(instance_path)));
        bundle.ref = instance_path;
        if (!bundle.inst.tree_spec.empty()) {
            bundle.tree = hppsim::parse_tree_spec(bundle.inst.tree_spec);
        }
    } else if (!tree_spec.empty()) {
        bundle.tree = hppsim::parse_tree_spec(tree_spec);
        bundle.inst = hppsim::build_from_tree(*bundle.tree);
        bundle.inst.tree_spec = hppsim::format_tree_spec(*bundle.tree);
        bundle.ref = "tree:" + bundle.inst.tree_spec;
    } else {
        throw std::invalid_argument("provide --instance or --tree");
    }
    if (bundle.inst.n > max_n) {
        throw std::invalid_argument("instance has " + std::to_string(bundle.inst.n) +
                                    " gates; raise --max-n (hard max 20)");
    }
    return bundle;
}

int cmd_gen(const std::string& tree_spec, const std::string& out_path, int max_n) {
    TreePtr tree = hppsim::parse_tree_spec(tree_spec);
    if (tree->leaf_count() > max_n) {
        throw std::invalid_argument("tree has more than --max-n gates");
    }
    hppsim::HppInstance inst = hppsim::build_from_tree(*tree);
    inst.tree_spec = hppsim::format_tree_spec(*tree);
    emit(hppsim::instance_to_json(inst).dump(2), out_path);
    return kExitOk;
}

int cmd_solve(const InstanceBundle& bundle, const std::string& gates_source,
              const std::string& y_text, uint64_t seed, const std::string& solver,
              double tol, bool dump_circuit, const std::string& out_path) {
    hppsim::GateAssignment gates;
    std::vector<int> requested_y;
    if (gates_source == "paper" || gates_source == "synth") {
        if (!bundle.tree) {
            throw std::invalid_argument("synthesis needs the composition tree; generate the "
                                        "instance with 'gen' or pass --tree");
        }
        if (y_text.empty()) throw std::invalid_argument("--y is required with --gates " + gates_source);
        requested_y = parse_labels(y_text);
        hppsim::SynthesisOptions opts;
        opts.randomize_rotations = gates_source == "synth";
        opts.seed = seed;
        auto result = hppsim::synthesize_gates(*bundle.tree, requested_y, opts);
        if (!result.ok()) {
            std::cerr << "unsatisfiable label: " << result.failure << " (at "
                      << result.failure_path << ")\n";
            return kExitUnsatisfiable;
        }
        gates = std::move(*result.gates);
    } else {
        gates = hppsim::gates_from_json(json::parse(hppsim::read_text_file(gates_source)), tol);
    }
    if (static_cast<int>(gates.gates.size()) != bundle.inst.n) {
        throw std::invalid_argument("gate count does not match the instance");
    }

    std::vector<std::string> solvers;
    if (solver == "all") {
        for (const auto& name : hppsim::kSolverNames) {
            if (hppsim::solver_applicable(name, bundle.inst, bundle.tree)) {
                solvers.push_back(name);
            }
        }
    } else {
        solvers.push_back(solver);
    }

    hppsim::SolveOptions opts;
    opts.dump_circuit = dump_circuit;
    json report;
    report["instance_ref"] = bundle.ref;
    report["solvers"] = json::object();
    for (const auto& name : solvers) {
        hppsim::SolveOutcome out = hppsim::run_solver(name, bundle.inst, bundle.tree, gates, opts);
        json entry;
        entry["y"] = out.y;
        json queries;
        for (size_t g = 0; g < out.per_gate.size(); ++g) {
            queries[std::to_string(g)] = out.per_gate[g];
        }
        queries["total"] = out.total_queries;
        entry["queries"] = std::move(queries);
        entry["residual"] = out.residual;
        entry["bound"] = out.bound;
        entry["wall_ms"] = out.wall_ms;
        if (out.circuit_dump) entry["circuit"] = *out.circuit_dump;
        report["solvers"][name] = std::move(entry);
    }
    emit(report.dump(2), out_path);
    return kExitOk;
}

int cmd_sweep(int n_min, int n_max, int trials, uint64_t seed, const std::string& out_path) {
    auto rows = hppsim::run_sweep(n_min, n_max, trials, seed);
    emit(hppsim::sweep_to_csv(rows), out_path);
    return kExitOk;
}

int cmd_census(const std::string& tree_spec, const std::string& out_path) {
    TreePtr tree = hppsim::parse_tree_spec(tree_spec);
    hppsim::LabelCensus census = hppsim::census_labels(*tree);
    json j;
    j["tree"] = hppsim::format_tree_spec(*tree);
    j["n"] = tree->leaf_count();
    j["n_y"] = census.satisfiable.size() + census.unsatisfiable.size();
    j["satisfiable"] = census.satisfiable;
    j["unsatisfiable"] = census.unsatisfiable;
    emit(j.dump(2), out_path);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hadamard promise problem generator and solver"};
    app.require_subcommand(1);

    std::string tree_spec, instance_path, gates_source = "paper", y_text, solver = "all";
    std::string out_path;
    uint64_t seed = 0;
    int max_n = 16;
    int n_min = 2, n_max = 12, trials = 1;
    double tol = hppsim::kDefaultTol;
    bool dump_circuit = false;

    auto* gen = app.add_subcommand("gen", "build an instance from a composition tree");
    gen->add_option("--tree", tree_spec, "tree spec, e.g. pair(slot1:pair)")->required();
    gen->add_option("--out", out_path, "output path (default stdout)");
    gen->add_option("--max-n", max_n, "gate count cap")->check(CLI::Range(1, 20));

    auto* solve = app.add_subcommand("solve", "solve an instance with one or all solvers");
    solve->add_option("--instance", instance_path, "instance JSON path");
    solve->add_option("--tree", tree_spec, "tree spec (alternative to --instance)");
    solve->add_option("--gates", gates_source,
                      "'paper' (worked examples), 'synth' (randomized), or a gates JSON path");
    solve->add_option("--y", y_text, "comma-separated sub-labels for synthesis");
    solve->add_option("--seed", seed, "seed for randomized synthesis");
    solve->add_option("--solver", solver, "switch|fig3|fig4|sim-n2|recursive|all");
    solve->add_option("--tol", tol, "numeric tolerance")
        ->check(CLI::Range(1e-12, 1e-6));
    solve->add_option("--max-n", max_n, "gate count cap")->check(CLI::Range(1, 20));
    solve->add_flag("--dump-circuit", dump_circuit, "embed circuit IR in the report");
    solve->add_option("--out", out_path, "output path (default stdout)");

    auto* sweep = app.add_subcommand("sweep", "query-count sweep over balanced pair trees");
    sweep->add_option("--n-min", n_min)->check(CLI::Range(2, 16));
    sweep->add_option("--n-max", n_max)->check(CLI::Range(2, 16));
    sweep->add_option("--trials", trials)->check(CLI::Range(1, 1000));
    sweep->add_option("--seed", seed);
    sweep->add_option("--out", out_path, "output path (default stdout)");

    auto* census = app.add_subcommand("census", "map satisfiable labels of an instance");
    census->add_option("--tree", tree_spec, "tree spec")->required();
    census->add_option("--out", out_path, "output path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_gen(tree_spec, out_path, max_n);
        if (solve->parsed()) {
            if (solver != "all" &&
                std::find(hppsim::kSolverNames.begin(), hppsim::kSolverNames.end(), solver) ==
                    hppsim::kSolverNames.end()) {
                throw std::invalid_argument("unknown solver '" + solver + "'");
            }
            InstanceBundle bundle = load_instance(instance_path, tree_spec, max_n);
            return cmd_solve(bundle, gates_source, y_text, seed, solver, tol, dump_circuit,
                             out_path);
        }
        if (sweep->parsed()) return cmd_sweep(n_min, n_max, trials, seed, out_path);
        if (census->parsed()) return cmd_census(tree_spec, out_path);
    } catch (const hppsim::ReadoutAmbiguous& e) {
        std::cerr << "promise violated: " << e.what() << "\n";
        return kExitPromiseViolated;
    } catch (const hppsim::NonDeterministicMeasurement& e) {
        std::cerr << "non-deterministic measurement: " << e.what() << "\n";
        return kExitNonDeterministic;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
