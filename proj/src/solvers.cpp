#include "hppsim/solvers.hpp"

#include <chrono>
#include <cstdio>
#include <stdexcept>

#include "hppsim/serialize.hpp"
#include "hppsim/synthesis.hpp"
#include "hppsim/treespec.hpp"

namespace hppsim {

namespace {

bool same_instance(const HppInstance& a, const HppInstance& b) {
    if (a.n != b.n || a.n_x != b.n_x || a.label_shape != b.label_shape) return false;
    for (int x = 0; x < a.n_x; ++x) {
        if (a.perms[static_cast<size_t>(x)].order != b.perms[static_cast<size_t>(x)].order) {
            return false;
        }
    }
    return a.signs == b.signs;
}

long long sim_switch_state_size(const HppInstance& inst) {
    long long size = inst.n_x * 2;
    for (int i = 0; i < inst.n; ++i) {
        if (size > kMaxStateAmplitudes) return size;
        size *= 2;
    }
    return size;
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                         start)
            .count();
    }
};

SolveOutcome from_execution(const std::string& name, const CausalCircuit& circuit,
                            const HppInstance& inst, const GateAssignment& gates,
                            double bound, bool decode_composite, const SolveOptions& opts) {
    Timer timer;
    ExecutionResult res =
        run_circuit(circuit, gates,
                    StateVector::zeros_basis([&] {
                        std::vector<int> dims;
                        for (const auto& r : circuit.registers) dims.push_back(r.dim);
                        return dims;
                    }()));
    SolveOutcome out;
    out.solver = name;
    out.y = decode_composite ? decode_label(res.outcomes.at(0), inst.label_shape)
                             : res.outcomes;
    out.per_gate = res.ledger.per_gate;
    out.total_queries = res.ledger.total;
    out.residual = res.max_measure_deviation;
    out.bound = bound;
    out.wall_ms = timer.ms();
    if (opts.dump_circuit) out.circuit_dump = circuit_to_json(circuit);
    return out;
}

}  // namespace

bool solver_applicable(const std::string& name, const HppInstance& inst, const TreePtr& tree) {
    if (name == "switch") return true;
    if (name == "fig3") return same_instance(inst, min_pair_instance());
    if (name == "fig4") return same_instance(inst, triple_hpp());
    if (name == "sim-n2") return sim_switch_state_size(inst) <= kMaxStateAmplitudes;
    if (name == "recursive") return tree != nullptr;
    return false;
}

SolveOutcome run_solver(const std::string& name, const HppInstance& inst, const TreePtr& tree,
                        const GateAssignment& gates, const SolveOptions& opts) {
    inst.validate();
    if (!solver_applicable(name, inst, tree)) {
        throw std::invalid_argument("solver '" + name + "' is not applicable here");
    }
    if (name == "switch") {
        Timer timer;
        SwitchReport rep = switch_solve(inst, gates);
        SolveOutcome out;
        out.solver = name;
        out.y = rep.recovered_y;
        out.per_gate.assign(static_cast<size_t>(inst.n), 1);
        out.total_queries = rep.query_count;
        out.residual = rep.residual;
        out.bound = static_cast<double>(inst.n);
        out.wall_ms = timer.ms();
        return out;
    }
    if (name == "fig3") {
        return from_execution(name, build_min_pair_circuit(), inst, gates,
                              /*bound=*/2.0 * inst.n - 1, /*decode_composite=*/false, opts);
    }
    if (name == "fig4") {
        return from_execution(name, build_min_triple_circuit(), inst, gates,
                              /*bound=*/2.0 * inst.n - 1, /*decode_composite=*/false, opts);
    }
    if (name == "sim-n2") {
        return from_execution(name, build_sim_switch_circuit(inst), inst, gates,
                              /*bound=*/static_cast<double>(inst.n) * inst.n,
                              /*decode_composite=*/true, opts);
    }
    if (name == "recursive") {
        Timer timer;
        CausalReport rep = recursive_solve(*tree, gates);
        SolveOutcome out;
        out.solver = name;
        out.y = rep.recovered_y;
        out.per_gate = rep.ledger.per_gate;
        out.total_queries = rep.ledger.total;
        out.residual = rep.residual;
        out.bound = rep.bound_value;
        out.wall_ms = timer.ms();
        return out;
    }
    throw std::invalid_argument("unknown solver '" + name + "'");
}

std::vector<SweepRow> run_sweep(int n_min, int n_max, int trials, uint64_t seed) {
    if (n_min < 2 || n_max < n_min) throw std::invalid_argument("run_sweep: bad n range");
    if (trials < 1) throw std::invalid_argument("run_sweep: trials must be >= 1");
    std::vector<SweepRow> rows;
    for (int n = n_min; n <= n_max; ++n) {
        TreePtr tree = balanced_pair_tree(n);
        const HppInstance inst = build_from_tree(*tree);
        std::vector<std::string> solvers = {"switch", "sim-n2", "recursive"};
        if (solver_applicable("fig3", inst, tree)) solvers.push_back("fig3");

        std::vector<double> query_sum(solvers.size(), 0.0);
        std::vector<int> successes(solvers.size(), 0);
        for (int trial = 0; trial < trials; ++trial) {
            std::mt19937_64 rng(seed + 1315423911ULL * static_cast<uint64_t>(n) +
                                static_cast<uint64_t>(trial));
            const std::vector<int> labels = random_satisfiable_labels(*tree, rng);
            SynthesisOptions sopts;
            sopts.randomize_rotations = true;
            sopts.seed = rng();
            auto synth = synthesize_gates(*tree, labels, sopts);
            if (!synth.ok()) {
                throw std::logic_error("run_sweep: sampled label was not satisfiable");
            }
            for (size_t s = 0; s < solvers.size(); ++s) {
                SolveOutcome out = run_solver(solvers[s], inst, tree, *synth.gates);
                query_sum[s] += static_cast<double>(out.total_queries);
                if (out.y == labels) ++successes[s];
            }
        }
        for (size_t s = 0; s < solvers.size(); ++s) {
            SweepRow row;
            row.n = n;
            row.solver = solvers[s];
            row.mean_queries = query_sum[s] / trials;
            row.bound_2n_minus_1 = 2.0 * n - 1;
            row.bound_n_squared = static_cast<double>(n) * n;
            row.bound_c_n_log2_n = query_bound(*tree);
            row.success_rate = static_cast<double>(successes[s]) / trials;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
    std::string csv =
        "n,solver,mean_queries,bound_2n_minus_1,bound_n_squared,bound_c_n_log2_n,"
        "success_rate\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%d,%s,%.12g,%.12g,%.12g,%.12g,%.12g\n", r.n,
                      r.solver.c_str(), r.mean_queries, r.bound_2n_minus_1, r.bound_n_squared,
                      r.bound_c_n_log2_n, r.success_rate);
        csv += buf;
    }
    return csv;
}

}  // namespace hppsim
