#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hppsim/complex_matrix.hpp"
#include "hppsim/sign_matrix.hpp"

namespace hppsim {

// Gate indices in application order: the first entry is applied first.
struct Permutation {
    std::vector<int> order;

    bool operator==(const Permutation&) const = default;
};

bool is_valid_permutation(const Permutation& p, int n);

// A Hadamard promise problem instance: n black-box gates, n_x selected
// permutations Pi_x with perms[0] the reference permutation, the sign matrix
// housing the promise Pi_x = s(x, y) * Pi_0, and the decomposition of the
// solution label y into per-composition-step sub-labels.
struct HppInstance {
    int n = 0;
    int n_x = 0;
    int gate_dim = 2;
    std::vector<Permutation> perms;
    SignMatrix signs{1};
    std::vector<int> label_shape;
    std::string tree_spec;  // optional provenance, carried through serialization

    void validate() const;  // throws std::invalid_argument on broken invariants
};

struct GateAssignment {
    std::vector<UnitaryGate> gates;
};

enum class NodeKind { Pair, Triple, TwoPerm };

// Recursive construction record. children has one entry per gate slot of the
// node; nullptr marks a slot kept as a concrete gate (a leaf). TwoPerm nodes
// must have only leaf children.
struct CompositionTree {
    NodeKind kind = NodeKind::Pair;
    int two_perm_n = 0;  // gate count, TwoPerm nodes only
    std::vector<std::shared_ptr<const CompositionTree>> children;

    int slot_count() const;
    int leaf_count() const;
    int node_count() const;

    void validate() const;
};

using TreePtr = std::shared_ptr<const CompositionTree>;

TreePtr make_pair_node(std::vector<TreePtr> children = {});
TreePtr make_triple_node(std::vector<TreePtr> children = {});
TreePtr make_two_perm_node(int n);

// Fundamental instances.
HppInstance pair_hpp();                 // commuting vs anticommuting gate pair
HppInstance triple_hpp();               // forward vs reversed gate triple
HppInstance two_permutation_hpp(int n); // forward vs reversed chain of n gates
HppInstance single_gate_hpp();          // trivial 1-gate, 1-permutation instance

// Replaces gate slot `slot` of `outer` with the whole of `inner`. Inner gates
// take indices slot .. slot+inner.n-1; outer gates above the slot shift up.
// Signs compose by kron_sign (outer index varies fastest) and label_shape
// concatenates.
HppInstance compose_hpp(const HppInstance& outer, int slot, const HppInstance& inner);

// Folds compose_hpp over the tree depth-first, children in slot order.
HppInstance build_from_tree(const CompositionTree& tree);

// Sub-label codec for the fixed linearization: the first entry of
// label_shape is the least significant digit.
std::vector<int> decode_label(long long y, std::span<const int> shape);
long long encode_label(std::span<const int> sub_labels, std::span<const int> shape);

// Computes every permuted product, extracts its sign against the reference
// product, and looks up the unique matching row of the sign matrix. Returns
// the decoded sub-labels, or nullopt when the promise is violated.
std::optional<std::vector<int>> verify_promise(const HppInstance& inst,
                                               const GateAssignment& gates,
                                               double tol = kDefaultTol);

}  // namespace hppsim
