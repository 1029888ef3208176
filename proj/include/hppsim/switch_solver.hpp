#pragma once

#include <optional>
#include <stdexcept>

#include "hppsim/instance.hpp"
#include "hppsim/state_vector.hpp"

namespace hppsim {

// Raised when no single control basis state carries essentially all of the
// probability after readout, i.e. the promise was violated.
struct ReadoutAmbiguous : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SwitchReport {
    std::vector<int> recovered_y;
    long long query_count = 0;  // always the gate count: this device calls each gate once
    double residual = 0.0;      // max |final - |y> (x) Pi_0|psi>| entrywise
    double final_target_fidelity = 0.0;
};

// The controlled-order map: for each control basis component x the target
// component is multiplied by the matrix of Pi_x. State registers must be
// [control (dim n_x), target (dim gate_dim)].
StateVector apply_n_switch(const HppInstance& inst, const GateAssignment& gates,
                           const StateVector& state);

// Full pipeline: equal superposition on the control, the switch, the inverse
// Hadamard transform, then a deterministic basis readout of y.
// target_init defaults to |0>.
SwitchReport switch_solve(const HppInstance& inst, const GateAssignment& gates,
                          std::span<const cplx> target_init = {});

// Probability mass threshold for accepting a readout as deterministic.
inline constexpr double kReadoutThreshold = 1.0 - 1e-6;

}  // namespace hppsim
