#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hppsim/instance.hpp"

namespace hppsim {

// Tracked algebraic form of a synthesized gate. Replacement rules depend on
// the form, never on pattern-matching the concrete matrix:
//   ZConjugate: gate proportional to basis * sigma_z * basis^dagger
//   IdentityLike: gate proportional to the identity
struct TrackedGate {
    enum class Form { ZConjugate, IdentityLike, Other };

    UnitaryGate gate;
    Form form = Form::Other;
    ComplexMatrix basis = ComplexMatrix::identity(2);  // meaningful for ZConjugate
};

struct SynthesisOptions {
    // When false the in-plane rotation V is the identity, which reproduces the
    // worked gate tables exactly. When true, V is a z-axis rotation by a
    // seeded random angle per anticommuting split.
    bool randomize_rotations = false;
    uint64_t seed = 0;
};

struct SynthesisResult {
    std::optional<GateAssignment> gates;
    std::string failure;       // non-empty iff !gates
    std::string failure_path;  // tree path of the offending node, e.g. "root.slot1"

    bool ok() const { return gates.has_value(); }
};

// Builds gates realizing sub-label vector y on the instance induced by the
// tree. Walks the tree top-down: the root emits the worked example for its
// own label; each subtree replaces its slot's tracked gate via the
// form-dependent rules. Certain combinations are unsatisfiable (an
// identity-formed slot can never split into an anticommuting pair); that is a
// first-class result, not an error. On success the assignment has been
// checked against verify_promise internally.
SynthesisResult synthesize_gates(const CompositionTree& tree, std::span<const int> y,
                                 const SynthesisOptions& opts = {});

// Sub-labels allowed for a node given the tracked form of the slot it
// replaces (nullopt at the root).
std::vector<int> allowed_sub_labels(const CompositionTree& node,
                                    std::optional<TrackedGate::Form> incoming_form);

// Draws a uniformly-random allowed label at every node (always satisfiable).
std::vector<int> random_satisfiable_labels(const CompositionTree& tree, std::mt19937_64& rng);

struct LabelCensus {
    std::vector<std::vector<int>> satisfiable;
    std::vector<std::vector<int>> unsatisfiable;
};

// Tries synthesis for every label vector of the instance. Guarded to
// n_x <= 1024.
LabelCensus census_labels(const CompositionTree& tree);

// Fixed conjugation frames used by the rules; exposed for tests.
ComplexMatrix x_axis_frame();  // maps sigma_z to -sigma_x, sigma_x to (sigma_y+sigma_z)/sqrt(2)
ComplexMatrix y_axis_frame();  // maps sigma_z onto the sigma_y axis

}  // namespace hppsim
