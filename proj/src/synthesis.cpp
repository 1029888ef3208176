#include "hppsim/synthesis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hppsim {

namespace {

using Form = TrackedGate::Form;

ComplexMatrix sigma(char name) { return pauli(name).matrix; }

ComplexMatrix conjugate_by(const ComplexMatrix& frame, const ComplexMatrix& m) {
    return matmul(matmul(frame, m), frame.dagger());
}

ComplexMatrix standard_hadamard() {
    const double r = 1.0 / std::sqrt(2.0);
    return ComplexMatrix{{r, r}, {r, -r}};
}

ComplexMatrix phase_s() { return ComplexMatrix{{1.0, 0.0}, {0.0, cplx{0.0, 1.0}}}; }

// z-axis rotation by angle theta (leaves sigma_z invariant).
ComplexMatrix z_rotation(double theta) {
    return ComplexMatrix{{std::polar(1.0, -theta / 2.0), 0.0},
                         {0.0, std::polar(1.0, theta / 2.0)}};
}

TrackedGate z_conjugate(const ComplexMatrix& gate, const ComplexMatrix& basis) {
    TrackedGate t;
    t.gate = UnitaryGate(gate);
    t.form = Form::ZConjugate;
    t.basis = basis;
    return t;
}

TrackedGate identity_like() {
    TrackedGate t;
    t.gate = pauli('I');
    t.form = Form::IdentityLike;
    return t;
}

struct Walker {
    const std::vector<int>& labels;
    size_t next = 0;
    std::mt19937_64 rng{};
    bool randomize = false;
    std::string failure{};
    std::string failure_path{};

    int take_label() { return labels[next++]; }

    bool fail(const std::string& why, const std::string& path) {
        failure = why;
        failure_path = path;
        return false;
    }

    // Gates of one node for its own sub-label. At the root `incoming` is
    // absent and the worked table examples seed the tracked forms; below the
    // root the slot's tracked gate is replaced according to its form.
    bool expand_node(const CompositionTree& node, const std::optional<TrackedGate>& incoming,
                     const std::string& path, std::vector<TrackedGate>& out) {
        const int y = take_label();
        if (!incoming) {
            return root_gates(node, y, path, out);
        }
        switch (node.kind) {
            case NodeKind::Pair: return split_pair(*incoming, y, path, out);
            case NodeKind::Triple: return split_triple(*incoming, y, path, out);
            case NodeKind::TwoPerm:
                return fail("two-permutation nodes cannot replace a gate slot", path);
        }
        return fail("unknown node kind", path);
    }

    bool root_gates(const CompositionTree& node, int y, const std::string& path,
                    std::vector<TrackedGate>& out) {
        const ComplexMatrix W = x_axis_frame();
        const ComplexMatrix WY = y_axis_frame();
        switch (node.kind) {
            case NodeKind::Pair:
                out = y == 0 ? std::vector<TrackedGate>{z_conjugate(sigma('X'), W),
                                                        z_conjugate(sigma('X'), W)}
                             : std::vector<TrackedGate>{z_conjugate(sigma('Y'), WY),
                                                        z_conjugate(sigma('X'), W)};
                return true;
            case NodeKind::Triple:
                out = y == 0 ? std::vector<TrackedGate>{
                                   z_conjugate(sigma('Y'), WY),
                                   z_conjugate(sigma('Z'), ComplexMatrix::identity(2)),
                                   z_conjugate(sigma('Z'), ComplexMatrix::identity(2))}
                             : std::vector<TrackedGate>{
                                   z_conjugate(sigma('X'), W), z_conjugate(sigma('Y'), WY),
                                   z_conjugate(sigma('Z'), ComplexMatrix::identity(2))};
                return true;
            case NodeKind::TwoPerm: {
                const int n = node.two_perm_n;
                if (n == 2 || n == 3) {
                    CompositionTree equiv;
                    equiv.kind = n == 2 ? NodeKind::Pair : NodeKind::Triple;
                    equiv.children.resize(static_cast<size_t>(n));
                    return root_gates(equiv, y, path, out);
                }
                if (y == 0) {
                    // All-identity gates satisfy the forward == reversed promise.
                    out.assign(static_cast<size_t>(n), identity_like());
                    return true;
                }
                return fail("no gate examples are known for the two-permutation "
                            "problem with more than 3 gates and label 1",
                            path);
            }
        }
        return fail("unknown node kind", path);
    }

    ComplexMatrix draw_rotation() {
        if (!randomize) return ComplexMatrix::identity(2);
        std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
        return z_rotation(angle(rng));
    }

    bool split_pair(const TrackedGate& g, int y, const std::string& path,
                    std::vector<TrackedGate>& out) {
        if (g.form == Form::IdentityLike) {
            if (y == 1) {
                return fail("the identity cannot be split into an anticommuting pair", path);
            }
            const ComplexMatrix z = sigma('Z');
            out = {z_conjugate(z, ComplexMatrix::identity(2)),
                   z_conjugate(z, ComplexMatrix::identity(2))};
            return true;
        }
        if (g.form != Form::ZConjugate) {
            return fail("gate form is not tracked; no replacement rule applies", path);
        }
        if (y == 0) {
            // Keep the gate, pair it with the identity.
            out = {g, identity_like()};
            return true;
        }
        const ComplexMatrix frame = matmul(g.basis, draw_rotation());
        out = {z_conjugate(conjugate_by(frame, sigma('X')), matmul(frame, standard_hadamard())),
               z_conjugate(conjugate_by(frame, sigma('Y')),
                           matmul(frame, matmul(phase_s(), standard_hadamard())))};
        return true;
    }

    bool split_triple(const TrackedGate& g, int y, const std::string& path,
                      std::vector<TrackedGate>& out) {
        const ComplexMatrix h = standard_hadamard();
        const ComplexMatrix sh = matmul(phase_s(), h);
        if (g.form == Form::IdentityLike) {
            if (y == 0) {
                out = {z_conjugate(sigma('X'), h), z_conjugate(sigma('X'), h), identity_like()};
            } else {
                const ComplexMatrix iy = sigma('Y').scaled(cplx{0.0, 1.0});
                out = {z_conjugate(sigma('X'), h), z_conjugate(iy, sh),
                       z_conjugate(sigma('Z'), ComplexMatrix::identity(2))};
            }
            return true;
        }
        if (g.form != Form::ZConjugate) {
            return fail("gate form is not tracked; no replacement rule applies", path);
        }
        const ComplexMatrix x_conj = conjugate_by(g.basis, sigma('X'));
        if (y == 0) {
            out = {g, z_conjugate(x_conj, matmul(g.basis, h)),
                   z_conjugate(x_conj, matmul(g.basis, h))};
        } else {
            const ComplexMatrix iy_conj =
                conjugate_by(g.basis, sigma('Y')).scaled(cplx{0.0, 1.0});
            out = {identity_like(), z_conjugate(x_conj, matmul(g.basis, h)),
                   z_conjugate(iy_conj, matmul(g.basis, sh))};
        }
        return true;
    }

    bool walk(const CompositionTree& node, const std::optional<TrackedGate>& incoming,
              const std::string& path, std::vector<TrackedGate>& out) {
        std::vector<TrackedGate> locals;
        if (!expand_node(node, incoming, path, locals)) return false;
        for (int slot = 0; slot < node.slot_count(); ++slot) {
            const auto& child = node.children[static_cast<size_t>(slot)];
            if (!child) {
                out.push_back(locals[static_cast<size_t>(slot)]);
                continue;
            }
            if (!walk(*child, locals[static_cast<size_t>(slot)],
                      path + ".slot" + std::to_string(slot), out)) {
                return false;
            }
        }
        return true;
    }
};

}  // namespace

ComplexMatrix x_axis_frame() {
    // Unitary W with W sigma_z W^dag = -sigma_x, W sigma_x W^dag =
    // (sigma_y+sigma_z)/sqrt(2) and W sigma_y W^dag = (sigma_y-sigma_z)/sqrt(2),
    // so the anticommuting split of sigma_x lands on the worked table entries.
    const double r = 1.0 / std::sqrt(2.0);
    const cplx p = std::polar(1.0, std::numbers::pi / 4.0);
    return ComplexMatrix{{r, r * p}, {-r, r * p}};
}

ComplexMatrix y_axis_frame() { return matmul(phase_s(), x_axis_frame()); }

SynthesisResult synthesize_gates(const CompositionTree& tree, std::span<const int> y,
                                 const SynthesisOptions& opts) {
    tree.validate();
    const HppInstance inst = build_from_tree(tree);
    if (y.size() != inst.label_shape.size()) {
        throw std::invalid_argument("synthesize_gates: sub-label count mismatch");
    }
    for (size_t i = 0; i < y.size(); ++i) {
        if (y[i] < 0 || y[i] >= inst.label_shape[i]) {
            throw std::invalid_argument("synthesize_gates: sub-label out of range");
        }
    }

    Walker walker{std::vector<int>(y.begin(), y.end())};
    walker.rng.seed(opts.seed);
    walker.randomize = opts.randomize_rotations;

    SynthesisResult result;
    std::vector<TrackedGate> tracked;
    tracked.reserve(static_cast<size_t>(tree.leaf_count()));
    if (!walker.walk(tree, std::nullopt, "root", tracked)) {
        result.failure = walker.failure;
        result.failure_path = walker.failure_path;
        return result;
    }

    GateAssignment assignment;
    assignment.gates.reserve(tracked.size());
    for (auto& t : tracked) assignment.gates.push_back(std::move(t.gate));

    auto recovered = verify_promise(inst, assignment);
    if (!recovered || !std::equal(recovered->begin(), recovered->end(), y.begin(), y.end())) {
        throw std::logic_error("synthesize_gates: produced gates fail their own promise");
    }
    result.gates = std::move(assignment);
    return result;
}

std::vector<int> allowed_sub_labels(const CompositionTree& node,
                                    std::optional<TrackedGate::Form> incoming_form) {
    if (!incoming_form) {
        if (node.kind == NodeKind::TwoPerm && node.two_perm_n > 3) return {0};
        return {0, 1};
    }
    switch (*incoming_form) {
        case Form::ZConjugate: return {0, 1};
        case Form::IdentityLike:
            return node.kind == NodeKind::Triple ? std::vector<int>{0, 1}
                                                 : std::vector<int>{0};
        case Form::Other: return {};
    }
    return {};
}

namespace {

void sample_labels(const CompositionTree& node, const std::optional<TrackedGate>& incoming,
                   std::mt19937_64& rng, std::vector<int>& labels) {
    auto allowed = allowed_sub_labels(
        node, incoming ? std::optional<TrackedGate::Form>(incoming->form) : std::nullopt);
    if (allowed.empty()) {
        throw std::logic_error("random_satisfiable_labels: node has no satisfiable label");
    }
    std::uniform_int_distribution<size_t> pick(0, allowed.size() - 1);
    const int y = allowed[pick(rng)];
    labels.push_back(y);

    // Re-run the split to learn the tracked forms handed to the children.
    Walker walker{{y}};
    std::vector<TrackedGate> locals;
    if (!walker.expand_node(node, incoming, "root", locals)) {
        throw std::logic_error("random_satisfiable_labels: allowed label failed to expand");
    }
    for (int slot = 0; slot < node.slot_count(); ++slot) {
        const auto& child = node.children[static_cast<size_t>(slot)];
        if (child) sample_labels(*child, locals[static_cast<size_t>(slot)], rng, labels);
    }
}

}  // namespace

std::vector<int> random_satisfiable_labels(const CompositionTree& tree, std::mt19937_64& rng) {
    tree.validate();
    std::vector<int> labels;
    labels.reserve(static_cast<size_t>(tree.node_count()));
    sample_labels(tree, std::nullopt, rng, labels);
    return labels;
}

LabelCensus census_labels(const CompositionTree& tree) {
    tree.validate();
    const HppInstance inst = build_from_tree(tree);
    if (inst.n_x > 1024) {
        throw std::length_error("census_labels: more than 1024 labels to enumerate");
    }
    LabelCensus census;
    for (long long y = 0; y < inst.n_x; ++y) {
        auto subs = decode_label(y, inst.label_shape);
        if (synthesize_gates(tree, subs).ok()) {
            census.satisfiable.push_back(std::move(subs));
        } else {
            census.unsatisfiable.push_back(std::move(subs));
        }
    }
    return census;
}

}  // namespace hppsim
