#include "hppsim/instance.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <stdexcept>
#include <string>

namespace hppsim {

bool is_valid_permutation(const Permutation& p, int n) {
    if (static_cast<int>(p.order.size()) != n) return false;
    std::vector<bool> seen(n, false);
    for (int v : p.order) {
        if (v < 0 || v >= n || seen[v]) return false;
        seen[v] = true;
    }
    return true;
}

void HppInstance::validate() const {
    if (n < 1) throw std::invalid_argument("HppInstance: n must be >= 1");
    if (gate_dim != 2) throw std::invalid_argument("HppInstance: gate_dim must be 2");
    if (n_x < 1 || static_cast<int>(perms.size()) != n_x || signs.size() != n_x) {
        throw std::invalid_argument("HppInstance: perms/signs size must equal n_x");
    }
    for (const auto& p : perms) {
        if (!is_valid_permutation(p, n)) {
            throw std::invalid_argument("HppInstance: invalid permutation");
        }
    }
    long long prod = 1;
    for (int m : label_shape) {
        if (m < 1) throw std::invalid_argument("HppInstance: label_shape entries must be >= 1");
        prod *= m;
    }
    if (prod != n_x) {
        throw std::invalid_argument("HppInstance: label_shape product must equal n_x");
    }
}

int CompositionTree::slot_count() const {
    switch (kind) {
        case NodeKind::Pair: return 2;
        case NodeKind::Triple: return 3;
        case NodeKind::TwoPerm: return two_perm_n;
    }
    return 0;
}

int CompositionTree::leaf_count() const {
    int total = 0;
    for (const auto& c : children) total += c ? c->leaf_count() : 1;
    return total;
}

int CompositionTree::node_count() const {
    int total = 1;
    for (const auto& c : children) {
        if (c) total += c->node_count();
    }
    return total;
}

void CompositionTree::validate() const {
    if (kind == NodeKind::TwoPerm && two_perm_n < 2) {
        throw std::invalid_argument("CompositionTree: two-permutation node needs n >= 2");
    }
    if (static_cast<int>(children.size()) != slot_count()) {
        throw std::invalid_argument("CompositionTree: children count must equal slot count");
    }
    for (const auto& c : children) {
        if (!c) continue;
        if (c->kind == NodeKind::TwoPerm) {
            // No composition rules exist for splitting into a two-permutation
            // sub-problem, so those nodes may only appear at the root.
            throw std::invalid_argument(
                "CompositionTree: two-permutation nodes are only allowed at the root");
        }
        c->validate();
    }
}

namespace {

std::vector<TreePtr> pad_children(std::vector<TreePtr> children, int slots) {
    children.resize(static_cast<size_t>(slots));
    return children;
}

}  // namespace

TreePtr make_pair_node(std::vector<TreePtr> children) {
    auto node = std::make_shared<CompositionTree>();
    node->kind = NodeKind::Pair;
    node->children = pad_children(std::move(children), 2);
    node->validate();
    return node;
}

TreePtr make_triple_node(std::vector<TreePtr> children) {
    auto node = std::make_shared<CompositionTree>();
    node->kind = NodeKind::Triple;
    node->children = pad_children(std::move(children), 3);
    node->validate();
    return node;
}

TreePtr make_two_perm_node(int n) {
    auto node = std::make_shared<CompositionTree>();
    node->kind = NodeKind::TwoPerm;
    node->two_perm_n = n;
    node->children = pad_children({}, n);
    node->validate();
    return node;
}

HppInstance two_permutation_hpp(int n) {
    if (n < 1) throw std::invalid_argument("two_permutation_hpp: n must be >= 1");
    HppInstance inst;
    inst.n = n;
    inst.n_x = 2;
    inst.perms.resize(2);
    inst.perms[0].order.resize(n);
    std::iota(inst.perms[0].order.begin(), inst.perms[0].order.end(), 0);
    inst.perms[1].order.assign(inst.perms[0].order.rbegin(), inst.perms[0].order.rend());
    inst.signs = sylvester(1);
    inst.label_shape = {2};
    inst.validate();
    return inst;
}

HppInstance pair_hpp() { return two_permutation_hpp(2); }

HppInstance triple_hpp() { return two_permutation_hpp(3); }

HppInstance single_gate_hpp() {
    HppInstance inst;
    inst.n = 1;
    inst.n_x = 1;
    inst.perms = {Permutation{{0}}};
    inst.signs = sylvester(0);
    inst.label_shape = {1};
    inst.validate();
    return inst;
}

HppInstance compose_hpp(const HppInstance& outer, int slot, const HppInstance& inner) {
    if (slot < 0 || slot >= outer.n) {
        throw std::invalid_argument("compose_hpp: slot out of range");
    }
    if (outer.gate_dim != inner.gate_dim) {
        throw std::invalid_argument("compose_hpp: gate dimensions differ");
    }
    HppInstance out;
    out.n = outer.n + inner.n - 1;
    out.n_x = outer.n_x * inner.n_x;
    out.gate_dim = outer.gate_dim;
    out.perms.resize(static_cast<size_t>(out.n_x));
    for (int x2 = 0; x2 < inner.n_x; ++x2) {
        for (int x1 = 0; x1 < outer.n_x; ++x1) {
            auto& perm = out.perms[static_cast<size_t>(x2) * outer.n_x + x1].order;
            perm.reserve(static_cast<size_t>(out.n));
            for (int g : outer.perms[x1].order) {
                if (g == slot) {
                    // Splice the inner permutation, shifted onto the slot range.
                    for (int h : inner.perms[x2].order) perm.push_back(slot + h);
                } else {
                    perm.push_back(g < slot ? g : g + inner.n - 1);
                }
            }
        }
    }
    out.signs = kron_sign(outer.signs, inner.signs);
    out.label_shape = outer.label_shape;
    out.label_shape.insert(out.label_shape.end(), inner.label_shape.begin(),
                           inner.label_shape.end());
    out.validate();
    return out;
}

namespace {

HppInstance fundamental_instance(const CompositionTree& node) {
    switch (node.kind) {
        case NodeKind::Pair: return pair_hpp();
        case NodeKind::Triple: return triple_hpp();
        case NodeKind::TwoPerm: return two_permutation_hpp(node.two_perm_n);
    }
    throw std::logic_error("fundamental_instance: unreachable");
}

}  // namespace

HppInstance build_from_tree(const CompositionTree& tree) {
    tree.validate();
    HppInstance inst = fundamental_instance(tree);
    int offset = 0;  // index shift accumulated by earlier child splices
    for (int slot = 0; slot < tree.slot_count(); ++slot) {
        const auto& child = tree.children[static_cast<size_t>(slot)];
        if (!child) continue;
        HppInstance inner = build_from_tree(*child);
        inst = compose_hpp(inst, slot + offset, inner);
        offset += inner.n - 1;
    }
    return inst;
}

std::vector<int> decode_label(long long y, std::span<const int> shape) {
    std::vector<int> subs(shape.size());
    for (size_t i = 0; i < shape.size(); ++i) {
        subs[i] = static_cast<int>(y % shape[i]);
        y /= shape[i];
    }
    if (y != 0) throw std::invalid_argument("decode_label: label out of range");
    return subs;
}

long long encode_label(std::span<const int> sub_labels, std::span<const int> shape) {
    if (sub_labels.size() != shape.size()) {
        throw std::invalid_argument("encode_label: sub-label count mismatch");
    }
    long long y = 0;
    for (size_t i = shape.size(); i-- > 0;) {
        if (sub_labels[i] < 0 || sub_labels[i] >= shape[i]) {
            throw std::invalid_argument("encode_label: sub-label out of range");
        }
        y = y * shape[i] + sub_labels[i];
    }
    return y;
}

std::optional<std::vector<int>> verify_promise(const HppInstance& inst,
                                               const GateAssignment& gates, double tol) {
    inst.validate();
    if (static_cast<int>(gates.gates.size()) != inst.n) {
        throw std::invalid_argument("verify_promise: gate count mismatch");
    }
    const ComplexMatrix reference =
        product_of_permutation(gates.gates, inst.perms[0].order);
    std::vector<int> extracted(static_cast<size_t>(inst.n_x));
    for (int x = 0; x < inst.n_x; ++x) {
        const ComplexMatrix m = product_of_permutation(gates.gates, inst.perms[x].order);
        auto sign = proportionality_sign(m, reference, tol);
        if (!sign) return std::nullopt;
        extracted[static_cast<size_t>(x)] = *sign;
    }
    int found = -1;
    for (int y = 0; y < inst.n_x; ++y) {
        bool match = true;
        for (int x = 0; x < inst.n_x; ++x) {
            if (inst.signs.sign(x, y) != extracted[static_cast<size_t>(x)]) {
                match = false;
                break;
            }
        }
        if (match) {
            // Hadamard rows are pairwise distinct, so at most one can match.
            assert(found == -1 && "sign rows of a Hadamard matrix must be distinct");
            found = y;
        }
    }
    if (found < 0) return std::nullopt;
    return decode_label(found, inst.label_shape);
}

}  // namespace hppsim
