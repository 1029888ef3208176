#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hppsim/causal.hpp"
#include "hppsim/instance.hpp"
#include "hppsim/switch_solver.hpp"

namespace hppsim {

// Solver identifiers accepted by the CLI. "fig3" and "fig4" are the minimal
// five-call circuits for the canonical three-gate instances.
inline const std::vector<std::string> kSolverNames = {"switch", "fig3", "fig4", "sim-n2",
                                                      "recursive"};

struct SolveOutcome {
    std::string solver;
    std::vector<int> y;
    std::vector<long long> per_gate;
    long long total_queries = 0;
    double residual = 0.0;
    double bound = 0.0;
    double wall_ms = 0.0;
    std::optional<nlohmann::json> circuit_dump;
};

struct SolveOptions {
    bool dump_circuit = false;
};

bool solver_applicable(const std::string& name, const HppInstance& inst, const TreePtr& tree);

// Runs one solver on one instance. `tree` may be null for solvers that do not
// need the construction record. Throws the solver's failure exceptions
// (ReadoutAmbiguous, NonDeterministicMeasurement) unchanged.
SolveOutcome run_solver(const std::string& name, const HppInstance& inst, const TreePtr& tree,
                        const GateAssignment& gates, const SolveOptions& opts = {});

struct SweepRow {
    int n = 0;
    std::string solver;
    double mean_queries = 0.0;
    double bound_2n_minus_1 = 0.0;
    double bound_n_squared = 0.0;
    double bound_c_n_log2_n = 0.0;
    double success_rate = 0.0;
};

// Sweeps balanced all-pair trees over [n_min, n_max]; each trial draws a
// random satisfiable label vector and synthesized gates, then runs every
// applicable solver.
std::vector<SweepRow> run_sweep(int n_min, int n_max, int trials, uint64_t seed);

std::string sweep_to_csv(const std::vector<SweepRow>& rows);

}  // namespace hppsim
