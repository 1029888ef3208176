#include "hppsim/causal.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace hppsim {

namespace {

struct Executor {
    const CausalCircuit& circuit;
    const GateAssignment& gates;
    StateVector& state;
    std::vector<long long> strides;
    QueryLedger ledger;
    std::vector<int> outcomes;
    double max_deviation = 0.0;

    Executor(const CausalCircuit& c, const GateAssignment& g, StateVector& s)
        : circuit(c), gates(g), state(s), strides(register_strides(s.dims)),
          ledger(c.num_gates) {}

    long long total() const { return static_cast<long long>(state.amps.size()); }

    // Hand-expanded complex butterfly: avoids the library's NaN-checked
    // complex multiply in the innermost loop.
    static void butterfly(cplx* amps, long long i0, long long i1, const double m[8]) {
        const double ar = amps[i0].real(), ai = amps[i0].imag();
        const double br = amps[i1].real(), bi = amps[i1].imag();
        amps[i0] = cplx{m[0] * ar - m[1] * ai + m[2] * br - m[3] * bi,
                        m[0] * ai + m[1] * ar + m[2] * bi + m[3] * br};
        amps[i1] = cplx{m[4] * ar - m[5] * ai + m[6] * br - m[7] * bi,
                        m[4] * ai + m[5] * ar + m[6] * bi + m[7] * br};
    }

    static void unpack_2x2(const ComplexMatrix& u, double m[8]) {
        m[0] = u.at(0, 0).real();
        m[1] = u.at(0, 0).imag();
        m[2] = u.at(0, 1).real();
        m[3] = u.at(0, 1).imag();
        m[4] = u.at(1, 0).real();
        m[5] = u.at(1, 0).imag();
        m[6] = u.at(1, 1).real();
        m[7] = u.at(1, 1).imag();
    }

    void apply_2x2(const ComplexMatrix& u, int wire) {
        const long long stride = strides[static_cast<size_t>(wire)];
        double m[8];
        unpack_2x2(u, m);
        cplx* amps = state.amps.data();
        const long long n = total();
        for (long long base = 0; base < n; base += 2 * stride) {
            for (long long off = 0; off < stride; ++off) {
                butterfly(amps, base + off, base + off + stride, m);
            }
        }
    }

    void run(const InstrBlackBox& in) {
        const auto& u = gates.gates[static_cast<size_t>(in.gate)].matrix;
        apply_2x2(u, in.wire);
        ledger.count(in.gate);
    }

    // Consecutive black-box calls on distinct wires commute, so they can be
    // applied chunk by chunk in one pass over the state. With the auxiliary
    // wires at the low-stride end this keeps each chunk in cache.
    void run_blackbox_run(std::span<const InstrBlackBox> run) {
        long long max_stride = 0;
        for (const auto& bb : run) {
            max_stride = std::max(max_stride, strides[static_cast<size_t>(bb.wire)]);
            ledger.count(bb.gate);
        }
        const long long chunk = 2 * max_stride;
        const long long n = total();
        cplx* amps = state.amps.data();
        std::vector<std::array<double, 8>> mats(run.size());
        for (size_t g = 0; g < run.size(); ++g) {
            unpack_2x2(gates.gates[static_cast<size_t>(run[g].gate)].matrix, mats[g].data());
        }
        for (long long base = 0; base < n; base += chunk) {
            for (size_t g = 0; g < run.size(); ++g) {
                const long long stride = strides[static_cast<size_t>(run[g].wire)];
                for (long long seg = base; seg < base + chunk; seg += 2 * stride) {
                    for (long long off = 0; off < stride; ++off) {
                        butterfly(amps, seg + off, seg + off + stride, mats[g].data());
                    }
                }
            }
        }
    }

    void run(const InstrFixedUnitary& in) { apply_2x2(in.matrix, in.wire); }

    void swap_block(long long begin, long long end, const InstrControlledSwap& in) {
        long long sa = strides[static_cast<size_t>(in.wire_a)];
        long long sb = strides[static_cast<size_t>(in.wire_b)];
        const int da = state.dims[static_cast<size_t>(in.wire_a)];
        const int db = state.dims[static_cast<size_t>(in.wire_b)];
        cplx* amps = state.amps.data();
        if (da == 2 && db == 2) {
            if (sa < sb) std::swap(sa, sb);
            if (sa % (2 * sb) == 0) {
                for (long long h = begin; h < end; h += 2 * sa) {
                    for (long long m = 0; m < sa; m += 2 * sb) {
                        cplx* lo = amps + h + m + sb;
                        cplx* hi = amps + h + m + sa;
                        for (long long l = 0; l < sb; ++l) std::swap(lo[l], hi[l]);
                    }
                }
                return;
            }
        }
        for (long long idx = begin; idx < end; ++idx) {
            const int a = static_cast<int>((idx / sa) % da);
            const int b = static_cast<int>((idx / sb) % db);
            if (a < b) {
                const long long partner = idx + (b - a) * (sa - sb);
                std::swap(amps[idx], amps[partner]);
            }
        }
    }

    void run(const InstrControlledSwap& in) {
        if (in.control_reg == 0) {
            // Control is the most significant register. Only accepted control
            // values need their contiguous block visited.
            const long long block = strides[0];
            for (int v = 0; v < state.dims[0]; ++v) {
                if (!in.accept[static_cast<size_t>(v)]) continue;
                swap_block(v * block, (v + 1) * block, in);
            }
            return;
        }
        const long long sc = strides[static_cast<size_t>(in.control_reg)];
        const int dc = state.dims[static_cast<size_t>(in.control_reg)];
        const long long sa = strides[static_cast<size_t>(in.wire_a)];
        const long long sb = strides[static_cast<size_t>(in.wire_b)];
        const int da = state.dims[static_cast<size_t>(in.wire_a)];
        const int db = state.dims[static_cast<size_t>(in.wire_b)];
        cplx* amps = state.amps.data();
        const long long n = total();
        for (long long idx = 0; idx < n; ++idx) {
            if (!in.accept[static_cast<size_t>((idx / sc) % dc)]) continue;
            const int a = static_cast<int>((idx / sa) % da);
            const int b = static_cast<int>((idx / sb) % db);
            if (a < b) {
                const long long partner = idx + (b - a) * (sa - sb);
                std::swap(amps[idx], amps[partner]);
            }
        }
    }

    void run(const InstrHadamard& in) {
        const SignMatrix& s = circuit.sign_pool[static_cast<size_t>(in.sign_ref)];
        const int dim = state.dims[static_cast<size_t>(in.reg)];
        const long long stride = strides[static_cast<size_t>(in.reg)];
        const long long n = total();
        std::vector<cplx> column(static_cast<size_t>(dim));
        cplx* amps = state.amps.data();
        for (long long base = 0; base < n; base += static_cast<long long>(dim) * stride) {
            for (long long off = 0; off < stride; ++off) {
                for (int v = 0; v < dim; ++v) {
                    column[static_cast<size_t>(v)] = amps[base + off + v * stride];
                }
                apply_hadamard_transform(s, column, in.inverse);
                for (int v = 0; v < dim; ++v) {
                    amps[base + off + v * stride] = column[static_cast<size_t>(v)];
                }
            }
        }
    }

    void run(const InstrMeasure& in) {
        const int dim = state.dims[static_cast<size_t>(in.reg)];
        const long long stride = strides[static_cast<size_t>(in.reg)];
        std::vector<double> prob(static_cast<size_t>(dim), 0.0);
        const long long n = total();
        const cplx* amps = state.amps.data();
        for (long long base = 0; base < n; base += static_cast<long long>(dim) * stride) {
            for (int v = 0; v < dim; ++v) {
                const long long lo = base + v * stride;
                double acc = 0.0;
                for (long long off = 0; off < stride; ++off) acc += std::norm(amps[lo + off]);
                prob[static_cast<size_t>(v)] += acc;
            }
        }
        int best = 0;
        for (int v = 1; v < dim; ++v) {
            if (prob[static_cast<size_t>(v)] > prob[static_cast<size_t>(best)]) best = v;
        }
        const double deviation = 1.0 - prob[static_cast<size_t>(best)];
        if (deviation > 1e-6) {
            throw NonDeterministicMeasurement(
                "measurement of register '" +
                circuit.registers[static_cast<size_t>(in.reg)].name +
                "' is not deterministic (top probability " +
                std::to_string(prob[static_cast<size_t>(best)]) + ")");
        }
        max_deviation = std::max(max_deviation, deviation);
        outcomes.push_back(best);
    }
};

void validate_circuit(const CausalCircuit& circuit, const GateAssignment& gates,
                      const StateVector& initial) {
    const int regs = static_cast<int>(circuit.registers.size());
    if (initial.dims.size() != circuit.registers.size()) {
        throw std::invalid_argument("run_circuit: register count mismatch");
    }
    for (int r = 0; r < regs; ++r) {
        if (initial.dims[static_cast<size_t>(r)] != circuit.registers[static_cast<size_t>(r)].dim) {
            throw std::invalid_argument("run_circuit: register dimension mismatch");
        }
    }
    if (static_cast<int>(gates.gates.size()) < circuit.num_gates) {
        throw std::invalid_argument("run_circuit: assignment does not cover all gate indices");
    }
    if (initial.total_dim() > kMaxStateAmplitudes) {
        throw std::length_error("run_circuit: state exceeds the amplitude cap");
    }
    auto check_reg = [&](int r) {
        if (r < 0 || r >= regs) throw std::invalid_argument("run_circuit: bad register index");
    };
    auto check_qubit_wire = [&](int r) {
        check_reg(r);
        if (circuit.registers[static_cast<size_t>(r)].dim != 2) {
            throw std::invalid_argument("run_circuit: gate wire must have dimension 2");
        }
    };
    for (const auto& instr : circuit.instructions) {
        if (const auto* bb = std::get_if<InstrBlackBox>(&instr)) {
            if (bb->gate < 0 || bb->gate >= circuit.num_gates) {
                throw std::invalid_argument("run_circuit: black-box gate index out of range");
            }
            check_qubit_wire(bb->wire);
        } else if (const auto* sw = std::get_if<InstrControlledSwap>(&instr)) {
            check_reg(sw->control_reg);
            check_reg(sw->wire_a);
            check_reg(sw->wire_b);
            if (circuit.registers[static_cast<size_t>(sw->wire_a)].dim !=
                circuit.registers[static_cast<size_t>(sw->wire_b)].dim) {
                throw std::invalid_argument("run_circuit: swapped wires differ in dimension");
            }
            if (static_cast<int>(sw->accept.size()) !=
                circuit.registers[static_cast<size_t>(sw->control_reg)].dim) {
                throw std::invalid_argument("run_circuit: accept mask size mismatch");
            }
        } else if (const auto* h = std::get_if<InstrHadamard>(&instr)) {
            check_reg(h->reg);
            if (h->sign_ref < 0 || h->sign_ref >= static_cast<int>(circuit.sign_pool.size())) {
                throw std::invalid_argument("run_circuit: sign matrix reference out of range");
            }
            if (circuit.sign_pool[static_cast<size_t>(h->sign_ref)].size() !=
                circuit.registers[static_cast<size_t>(h->reg)].dim) {
                throw std::invalid_argument("run_circuit: sign matrix size mismatch");
            }
        } else if (const auto* fx = std::get_if<InstrFixedUnitary>(&instr)) {
            check_qubit_wire(fx->wire);
        } else if (const auto* m = std::get_if<InstrMeasure>(&instr)) {
            check_reg(m->reg);
        }
    }
}

}  // namespace

long long structural_query_count(const CausalCircuit& circuit) {
    long long n = 0;
    for (const auto& instr : circuit.instructions) {
        if (std::holds_alternative<InstrBlackBox>(instr)) ++n;
    }
    return n;
}

ExecutionResult run_circuit(const CausalCircuit& circuit, const GateAssignment& gates,
                            StateVector initial) {
    validate_circuit(circuit, gates, initial);
    Executor exec(circuit, gates, initial);
    const auto& instrs = circuit.instructions;
    for (size_t i = 0; i < instrs.size();) {
        if (std::holds_alternative<InstrBlackBox>(instrs[i])) {
            std::vector<InstrBlackBox> run;
            std::vector<bool> wire_used(circuit.registers.size(), false);
            size_t j = i;
            while (j < instrs.size()) {
                const auto* bb = std::get_if<InstrBlackBox>(&instrs[j]);
                if (!bb || wire_used[static_cast<size_t>(bb->wire)]) break;
                wire_used[static_cast<size_t>(bb->wire)] = true;
                run.push_back(*bb);
                ++j;
            }
            if (run.size() == 1) {
                exec.run(run[0]);
            } else {
                exec.run_blackbox_run(run);
            }
            i = j;
            continue;
        }
        std::visit([&](const auto& in) { exec.run(in); }, instrs[i]);
        ++i;
    }
    ExecutionResult result{std::move(exec.outcomes), std::move(exec.ledger),
                           std::move(initial), exec.max_deviation};
    return result;
}

namespace {

std::vector<uint8_t> qubit_accept(int value) {
    std::vector<uint8_t> accept(2, 0);
    accept[static_cast<size_t>(value)] = 1;
    return accept;
}

void swap_gate_swap(CausalCircuit& c, int ctrl, int ctrl_value, int gate, int target,
                    int aux) {
    c.instructions.push_back(InstrControlledSwap{ctrl, qubit_accept(ctrl_value), target, aux});
    c.instructions.push_back(InstrBlackBox{gate, target});
    c.instructions.push_back(InstrControlledSwap{ctrl, qubit_accept(ctrl_value), target, aux});
}

}  // namespace

HppInstance min_pair_instance() {
    HppInstance inner = pair_hpp();
    HppInstance inst = compose_hpp(pair_hpp(), 1, inner);
    inst.tree_spec = "pair(slot1:pair)";
    return inst;
}

CausalCircuit build_min_pair_circuit() {
    CausalCircuit c;
    c.registers = {{"c1", 2}, {"c2", 2}, {"target", 2}, {"a0", 2}, {"a1", 2}};
    c.sign_pool = {sylvester(1)};
    c.num_gates = 3;
    constexpr int c1 = 0, c2 = 1, target = 2, a0 = 3, a1 = 4;
    c.instructions.push_back(InstrHadamard{c1, 0, false});
    c.instructions.push_back(InstrHadamard{c2, 0, false});
    // When a control is set, the matching swap parks the walking state in the
    // auxiliary wire so the gate call lands on the auxiliary's content.
    swap_gate_swap(c, c1, 1, /*gate=*/0, target, a0);
    swap_gate_swap(c, c2, 1, /*gate=*/1, target, a1);
    c.instructions.push_back(InstrBlackBox{2, target});
    swap_gate_swap(c, c2, 0, /*gate=*/1, target, a1);
    swap_gate_swap(c, c1, 0, /*gate=*/0, target, a0);
    c.instructions.push_back(InstrHadamard{c1, 0, false});
    c.instructions.push_back(InstrHadamard{c2, 0, false});
    c.instructions.push_back(InstrMeasure{c1});
    c.instructions.push_back(InstrMeasure{c2});
    return c;
}

CausalCircuit build_min_triple_circuit() {
    CausalCircuit c;
    c.registers = {{"c", 2}, {"target", 2}, {"a0", 2}, {"a1", 2}};
    c.sign_pool = {sylvester(1)};
    c.num_gates = 3;
    constexpr int ctrl = 0, target = 1, a0 = 2, a1 = 3;
    c.instructions.push_back(InstrHadamard{ctrl, 0, false});
    swap_gate_swap(c, ctrl, 1, /*gate=*/0, target, a0);
    swap_gate_swap(c, ctrl, 1, /*gate=*/1, target, a1);
    c.instructions.push_back(InstrBlackBox{2, target});
    swap_gate_swap(c, ctrl, 0, /*gate=*/1, target, a1);
    swap_gate_swap(c, ctrl, 0, /*gate=*/0, target, a0);
    c.instructions.push_back(InstrHadamard{ctrl, 0, false});
    c.instructions.push_back(InstrMeasure{ctrl});
    return c;
}

CausalCircuit build_sim_switch_circuit(const HppInstance& inst) {
    inst.validate();
    const int n = inst.n;
    const int n_x = inst.n_x;
    CausalCircuit c;
    c.num_gates = n;
    c.registers.reserve(static_cast<size_t>(n) + 2);
    c.registers.push_back({"control", n_x});
    c.registers.push_back({"target", 2});
    for (int g = 0; g < n; ++g) c.registers.push_back({"a" + std::to_string(g), 2});
    c.sign_pool = {inst.signs};
    constexpr int ctrl = 0, target = 1;
    const auto aux = [](int g) { return 2 + g; };

    c.instructions.push_back(InstrHadamard{ctrl, 0, false});
    for (int step = 0; step < n; ++step) {
        // Route the walking target into the auxiliary slot of whichever gate
        // this permutation places at the current position, fire every gate
        // once on its own auxiliary wire, then route back.
        std::vector<InstrControlledSwap> swaps;
        swaps.reserve(static_cast<size_t>(n));
        for (int g = 0; g < n; ++g) {
            InstrControlledSwap sw{ctrl, std::vector<uint8_t>(static_cast<size_t>(n_x), 0),
                                   target, aux(g)};
            for (int x = 0; x < n_x; ++x) {
                if (inst.perms[static_cast<size_t>(x)].order[static_cast<size_t>(step)] == g) {
                    sw.accept[static_cast<size_t>(x)] = 1;
                }
            }
            swaps.push_back(std::move(sw));
        }
        for (const auto& sw : swaps) c.instructions.push_back(sw);
        for (int g = 0; g < n; ++g) c.instructions.push_back(InstrBlackBox{g, aux(g)});
        for (const auto& sw : swaps) c.instructions.push_back(sw);
    }
    c.instructions.push_back(InstrHadamard{ctrl, 0, true});
    c.instructions.push_back(InstrMeasure{ctrl});
    return c;
}

namespace {

int max_fundamental_size(const CompositionTree& tree) {
    int k = tree.slot_count();
    for (const auto& child : tree.children) {
        if (child) k = std::max(k, max_fundamental_size(*child));
    }
    return k;
}

bool is_fundamental(const CompositionTree& tree) {
    return std::all_of(tree.children.begin(), tree.children.end(),
                       [](const TreePtr& c) { return c == nullptr; });
}

std::vector<Permutation> fundamental_block_orders(const CompositionTree& node) {
    // Block-level permutations of the node's own kind, in application order.
    return two_permutation_hpp(node.slot_count()).perms;
}

struct RecursiveSolver {
    const GateAssignment& gates;
    QueryLedger ledger;
    double max_deviation = 0.0;

    explicit RecursiveSolver(const GateAssignment& g)
        : gates(g), ledger(static_cast<int>(g.gates.size())) {}

    void merge(const QueryLedger& local, int gate_offset) {
        for (size_t g = 0; g < local.per_gate.size(); ++g) {
            ledger.per_gate[g + static_cast<size_t>(gate_offset)] += local.per_gate[g];
        }
        ledger.total += local.total;
    }

    std::vector<int> solve_fundamental(const CompositionTree& node, int gate_offset) {
        const HppInstance inst = build_from_tree(node);
        GateAssignment slice;
        slice.gates.assign(gates.gates.begin() + gate_offset,
                           gates.gates.begin() + gate_offset + inst.n);
        const CausalCircuit circuit = build_sim_switch_circuit(inst);
        std::vector<int> dims;
        dims.push_back(inst.n_x);
        dims.insert(dims.end(), static_cast<size_t>(inst.n) + 1, 2);
        ExecutionResult res = run_circuit(circuit, slice, StateVector::zeros_basis(dims));
        merge(res.ledger, gate_offset);
        max_deviation = std::max(max_deviation, res.max_measure_deviation);
        return decode_label(res.outcomes.at(0), inst.label_shape);
    }

    std::vector<int> solve(const CompositionTree& node, int gate_offset) {
        if (is_fundamental(node)) return solve_fundamental(node, gate_offset);

        const int k = node.slot_count();
        std::vector<int> child_offsets(static_cast<size_t>(k));
        std::vector<int> child_sizes(static_cast<size_t>(k));
        int offset = gate_offset;
        for (int i = 0; i < k; ++i) {
            const auto& child = node.children[static_cast<size_t>(i)];
            child_offsets[static_cast<size_t>(i)] = offset;
            child_sizes[static_cast<size_t>(i)] = child ? child->leaf_count() : 1;
            offset += child_sizes[static_cast<size_t>(i)];
        }

        // Children first: each non-trivial block's own sub-label comes from an
        // independent recursive solve.
        std::vector<std::vector<int>> child_labels(static_cast<size_t>(k));
        for (int i = 0; i < k; ++i) {
            const auto& child = node.children[static_cast<size_t>(i)];
            if (child) {
                child_labels[static_cast<size_t>(i)] =
                    solve(*child, child_offsets[static_cast<size_t>(i)]);
            }
        }

        RootStage stage = build_root_stage(node, gates, gate_offset);
        std::vector<int> dims;
        dims.push_back(2);
        dims.insert(dims.end(), stage.circuit.registers.size() - 1, 2);
        ExecutionResult res = run_circuit(stage.circuit, gates, StateVector::zeros_basis(dims));
        // Stage instructions address global gate indices, so merge at offset 0.
        merge(res.ledger, 0);
        max_deviation = std::max(max_deviation, res.max_measure_deviation);

        std::vector<int> labels{res.outcomes.at(0)};
        for (int i = 0; i < k; ++i) {
            const auto& sub = child_labels[static_cast<size_t>(i)];
            labels.insert(labels.end(), sub.begin(), sub.end());
        }
        return labels;
    }
};

}  // namespace

RootStage build_root_stage(const CompositionTree& tree, const GateAssignment& gates,
                           int gate_offset) {
    tree.validate();
    if (is_fundamental(tree)) {
        throw std::invalid_argument("build_root_stage: node has no composed children");
    }
    const int k = tree.slot_count();
    RootStage stage;
    stage.block_count = k;
    stage.block_sizes.resize(static_cast<size_t>(k));
    stage.block_offsets.resize(static_cast<size_t>(k));
    int offset = gate_offset;
    for (int i = 0; i < k; ++i) {
        const auto& child = tree.children[static_cast<size_t>(i)];
        stage.block_offsets[static_cast<size_t>(i)] = offset;
        stage.block_sizes[static_cast<size_t>(i)] = child ? child->leaf_count() : 1;
        offset += stage.block_sizes[static_cast<size_t>(i)];
    }

    // Stationary block: the largest one, smallest index on ties. Its sub-solve
    // already pays for (and realises) its reference permutation.
    stage.j = 0;
    for (int i = 1; i < k; ++i) {
        if (stage.block_sizes[static_cast<size_t>(i)] >
            stage.block_sizes[static_cast<size_t>(stage.j)]) {
            stage.j = i;
        }
    }

    stage.block_pi0.reserve(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) {
        // Every reference permutation is the identity order, so a block's
        // reference product is its gate slice multiplied in index order.
        std::vector<int> order(static_cast<size_t>(stage.block_sizes[static_cast<size_t>(i)]));
        for (size_t g = 0; g < order.size(); ++g) {
            order[g] = stage.block_offsets[static_cast<size_t>(i)] + static_cast<int>(g);
        }
        stage.block_pi0.push_back(product_of_permutation(gates.gates, order));
    }

    CausalCircuit& c = stage.circuit;
    c.num_gates = static_cast<int>(gates.gates.size());
    c.registers.push_back({"control", 2});
    c.registers.push_back({"target", 2});
    stage.aux_register_of_block.assign(static_cast<size_t>(k), -1);
    for (int i = 0; i < k; ++i) {
        if (i == stage.j) continue;
        stage.aux_register_of_block[static_cast<size_t>(i)] =
            static_cast<int>(c.registers.size());
        c.registers.push_back({"ablk" + std::to_string(i), 2});
    }
    c.sign_pool = {sylvester(1)};
    constexpr int ctrl = 0, target = 1;

    const std::vector<Permutation> block_orders = fundamental_block_orders(tree);
    const int n_xt = static_cast<int>(block_orders.size());
    std::vector<int> pos_of_j(static_cast<size_t>(n_xt));
    for (int x = 0; x < n_xt; ++x) {
        const auto& ord = block_orders[static_cast<size_t>(x)].order;
        pos_of_j[static_cast<size_t>(x)] = static_cast<int>(
            std::find(ord.begin(), ord.end(), stage.j) - ord.begin());
    }

    auto add_step = [&](const std::vector<std::vector<uint8_t>>& accept_of_block) {
        std::vector<InstrControlledSwap> swaps;
        for (int i = 0; i < k; ++i) {
            if (i == stage.j) continue;
            swaps.push_back(InstrControlledSwap{ctrl, accept_of_block[static_cast<size_t>(i)],
                                                target,
                                                stage.aux_register_of_block[static_cast<size_t>(i)]});
        }
        for (const auto& sw : swaps) c.instructions.push_back(sw);
        for (int i = 0; i < k; ++i) {
            if (i == stage.j) continue;
            for (int g = 0; g < stage.block_sizes[static_cast<size_t>(i)]; ++g) {
                c.instructions.push_back(
                    InstrBlackBox{stage.block_offsets[static_cast<size_t>(i)] + g,
                                  stage.aux_register_of_block[static_cast<size_t>(i)]});
            }
        }
        for (const auto& sw : swaps) c.instructions.push_back(sw);
    };

    c.instructions.push_back(InstrHadamard{ctrl, 0, false});
    // Up to k-1 moving blocks precede the stationary one; each pre-step t
    // handles whichever block sits at position t, post-steps mirror it.
    for (int t = 0; t < k - 1; ++t) {
        std::vector<std::vector<uint8_t>> accept(
            static_cast<size_t>(k), std::vector<uint8_t>(static_cast<size_t>(n_xt), 0));
        for (int x = 0; x < n_xt; ++x) {
            const auto& ord = block_orders[static_cast<size_t>(x)].order;
            if (t < pos_of_j[static_cast<size_t>(x)]) {
                accept[static_cast<size_t>(ord[static_cast<size_t>(t)])]
                      [static_cast<size_t>(x)] = 1;
            }
        }
        add_step(accept);
    }
    c.instructions.push_back(InstrFixedUnitary{
        "block" + std::to_string(stage.j) + "_pi0",
        stage.block_pi0[static_cast<size_t>(stage.j)], target});
    for (int t = 0; t < k - 1; ++t) {
        std::vector<std::vector<uint8_t>> accept(
            static_cast<size_t>(k), std::vector<uint8_t>(static_cast<size_t>(n_xt), 0));
        for (int x = 0; x < n_xt; ++x) {
            const auto& ord = block_orders[static_cast<size_t>(x)].order;
            const int pos = pos_of_j[static_cast<size_t>(x)] + 1 + t;
            if (pos < k) {
                accept[static_cast<size_t>(ord[static_cast<size_t>(pos)])]
                      [static_cast<size_t>(x)] = 1;
            }
        }
        add_step(accept);
    }
    c.instructions.push_back(InstrHadamard{ctrl, 0, true});
    c.instructions.push_back(InstrMeasure{ctrl});
    return stage;
}

double query_bound(const CompositionTree& tree) {
    tree.validate();
    const int n = tree.leaf_count();
    if (n <= 1) return 0.0;
    const double c = 2.0 * (max_fundamental_size(tree) - 1);
    return c * n * std::log2(static_cast<double>(n));
}

CausalReport recursive_solve(const CompositionTree& tree, const GateAssignment& gates) {
    tree.validate();
    if (static_cast<int>(gates.gates.size()) != tree.leaf_count()) {
        throw std::invalid_argument("recursive_solve: gate count mismatch");
    }
    RecursiveSolver solver(gates);
    CausalReport report;
    report.recovered_y = solver.solve(tree, 0);
    report.ledger = std::move(solver.ledger);
    report.residual = solver.max_deviation;
    report.bound_value = query_bound(tree);
    return report;
}

}  // namespace hppsim
