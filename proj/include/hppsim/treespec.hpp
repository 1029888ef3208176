#pragma once

#include <string>

#include "hppsim/instance.hpp"

namespace hppsim {

// Composition-tree micro-grammar:
//   tree     := "pair" children? | "triple" children? | "twoperm" "(" INT ")"
//   children := "(" slot ("," slot)* ")"
//   slot     := "slot" INT ":" tree
// e.g. "pair(slot1:pair(slot0:triple))". Whitespace is ignored. Slots not
// listed stay concrete gates.
TreePtr parse_tree_spec(const std::string& spec);

// Canonical spelling (non-leaf slots in increasing order, no whitespace).
std::string format_tree_spec(const CompositionTree& tree);

// Balanced tree of pair nodes with n leaves; the larger half goes to slot 1,
// so n = 3 yields the canonical three-gate instance.
TreePtr balanced_pair_tree(int n);

}  // namespace hppsim
