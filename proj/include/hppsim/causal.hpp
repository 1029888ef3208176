#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "hppsim/instance.hpp"
#include "hppsim/state_vector.hpp"

namespace hppsim {

// Raised when a measured register is not within tolerance of a basis state.
struct NonDeterministicMeasurement : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CircuitRegister {
    std::string name;
    int dim = 2;
};

// Fixed-order circuit IR. Controlled swaps take an arbitrary predicate on the
// control register's basis value, stored as an explicit accept mask so
// circuits stay serialisable.
struct InstrHadamard {
    int reg = 0;
    int sign_ref = 0;  // index into CausalCircuit::sign_pool
    bool inverse = false;
};

struct InstrControlledSwap {
    int control_reg = 0;
    std::vector<uint8_t> accept;  // size = dim of control_reg
    int wire_a = 0;
    int wire_b = 0;
};

struct InstrBlackBox {
    int gate = 0;
    int wire = 0;
};

// A compound unitary whose black-box cost was already accounted elsewhere
// (the recursive solver applies a sub-problem's reference permutation this
// way after solving that sub-problem separately).
struct InstrFixedUnitary {
    std::string label;
    ComplexMatrix matrix = ComplexMatrix::identity(2);
    int wire = 0;
};

struct InstrMeasure {
    int reg = 0;
};

using Instruction = std::variant<InstrHadamard, InstrControlledSwap, InstrBlackBox,
                                 InstrFixedUnitary, InstrMeasure>;

struct CausalCircuit {
    std::vector<CircuitRegister> registers;
    std::vector<SignMatrix> sign_pool;
    std::vector<Instruction> instructions;
    int num_gates = 0;  // black-box indices must be < num_gates
};

// Exact per-gate black-box call counts. Fixed-order circuits call every
// black-box position unconditionally, so counts are branch-independent.
struct QueryLedger {
    std::vector<long long> per_gate;
    long long total = 0;

    explicit QueryLedger(int num_gates = 0) : per_gate(static_cast<size_t>(num_gates), 0) {}
    void count(int gate) {
        ++per_gate[static_cast<size_t>(gate)];
        ++total;
    }
};

struct ExecutionResult {
    std::vector<int> outcomes;  // one entry per measure instruction, in order
    QueryLedger ledger;
    StateVector final_state;
    double max_measure_deviation = 0.0;  // max over measures of 1 - p(best)
};

// Number of black-box instructions in the circuit (the ledger total of any
// run, by construction).
long long structural_query_count(const CausalCircuit& circuit);

ExecutionResult run_circuit(const CausalCircuit& circuit, const GateAssignment& gates,
                            StateVector initial);

// Executor guard: largest amplitude count a single run may allocate.
inline constexpr long long kMaxStateAmplitudes = 1LL << 26;

struct CausalReport {
    std::vector<int> recovered_y;
    QueryLedger ledger{0};
    double residual = 0.0;
    double bound_value = 0.0;
};

// Minimal five-query circuit for the three-gate instance built from two
// nested gate pairs (two control qubits; gate calls U0:2, U1:2, U2:1).
CausalCircuit build_min_pair_circuit();

// One-control-qubit variant for the forward-vs-reversed gate triple; also
// five calls.
CausalCircuit build_min_triple_circuit();

// The instances those circuits solve.
HppInstance min_pair_instance();  // pair with a pair spliced into slot 1

// Switch simulation with one swap-in/swap-out round per position: each gate
// fires once per round on its own auxiliary wire, n^2 calls in total.
// Registers are [control, target, a_0 .. a_{n-1}].
CausalCircuit build_sim_switch_circuit(const HppInstance& inst);

// C * n * log2(n) with C = 2 * (k_max - 1), k_max the largest fundamental
// block size in the tree. Returns 0 for a single gate.
double query_bound(const CompositionTree& tree);

// One recursion stage: the root's child blocks are routed around the largest
// block j, whose reference permutation is applied once in the middle as an
// already-accounted fixed unitary. Exposed for inspection and tests.
struct RootStage {
    CausalCircuit circuit;
    int block_count = 0;
    int j = 0;                            // index of the stationary block
    std::vector<int> block_sizes;         // gates per block
    std::vector<int> block_offsets;       // first global gate index per block
    std::vector<ComplexMatrix> block_pi0; // reference product per block
    std::vector<int> aux_register_of_block;  // -1 for block j
};

RootStage build_root_stage(const CompositionTree& tree, const GateAssignment& gates,
                           int gate_offset = 0);

// Full divide-and-conquer solver: child sub-problems are solved recursively
// (switch simulation at fundamental nodes), then each node's root stage
// recovers its own sub-label. All invocations share one ledger.
CausalReport recursive_solve(const CompositionTree& tree, const GateAssignment& gates);

}  // namespace hppsim
