#include <random>

#include "doctest.h"

#include "hppsim/causal.hpp"
#include "hppsim/switch_solver.hpp"
#include "hppsim/synthesis.hpp"
#include "hppsim/treespec.hpp"
#include "test_support.hpp"

using namespace hppsim;
using namespace hppsim::testing;

namespace {

StateVector product_state(const std::vector<int>& dims,
                          const std::vector<std::vector<cplx>>& factors) {
    StateVector s;
    s.dims = dims;
    s.amps = {cplx{1.0, 0.0}};
    for (const auto& f : factors) {
        std::vector<cplx> next(s.amps.size() * f.size());
        for (size_t i = 0; i < s.amps.size(); ++i)
            for (size_t j = 0; j < f.size(); ++j) next[i * f.size() + j] = s.amps[i] * f[j];
        s.amps = std::move(next);
    }
    return s;
}

std::vector<cplx> basis2(int v) { return v == 0 ? std::vector<cplx>{1.0, 0.0}
                                                : std::vector<cplx>{0.0, 1.0}; }

std::vector<cplx> apply2(const ComplexMatrix& m, const std::vector<cplx>& v) {
    std::vector<cplx> out(2, cplx{0.0, 0.0});
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) out[static_cast<size_t>(r)] += m.at(r, c) * v[static_cast<size_t>(c)];
    return out;
}

ComplexMatrix matrix_power(const ComplexMatrix& m, int k) {
    ComplexMatrix out = ComplexMatrix::identity(m.rows());
    for (int i = 0; i < k; ++i) out = matmul(m, out);
    return out;
}

}  // namespace

TEST_CASE("executor basics: empty circuit and a single black-box call") {
    CausalCircuit empty;
    empty.registers = {{"q", 2}};
    const ExecutionResult none =
        run_circuit(empty, GateAssignment{}, StateVector::zeros_basis({2}));
    CHECK(none.ledger.total == 0);
    CHECK(std::abs(none.final_state.amps[0] - 1.0) == 0.0);

    CausalCircuit single;
    single.registers = {{"q", 2}};
    single.num_gates = 1;
    single.instructions.push_back(InstrBlackBox{0, 0});
    const ExecutionResult res =
        run_circuit(single, gates_of({sx()}), StateVector::zeros_basis({2}));
    CHECK(res.ledger.per_gate == std::vector<long long>{1});
    CHECK(res.ledger.total == 1);
    CHECK(std::abs(res.final_state.amps[1] - 1.0) < 1e-15);
}

TEST_CASE("the two-control minimal circuit solves every worked nested row") {
    const CausalCircuit circuit = build_min_pair_circuit();
    CHECK(structural_query_count(circuit) == 5);
    for (int y1 = 0; y1 < 2; ++y1)
        for (int y2 = 0; y2 < 2; ++y2) {
            const ExecutionResult res = run_circuit(circuit, table_nested_row(y1, y2),
                                                    StateVector::zeros_basis(full_dims(circuit)));
            CHECK(res.outcomes == std::vector<int>{y1, y2});
            CHECK(res.ledger.per_gate == std::vector<long long>{2, 2, 1});
            CHECK(res.ledger.total == 5);
        }
}

TEST_CASE("minimal circuit wire annotations: target, a0, a1 end states") {
    const CausalCircuit circuit = build_min_pair_circuit();
    const HppInstance inst = min_pair_instance();
    std::mt19937_64 rng(89);
    for (int trial = 0; trial < 25; ++trial) {
        const int y1 = static_cast<int>(rng() % 2), y2 = static_cast<int>(rng() % 2);
        const GateAssignment gates = table_nested_row(y1, y2);
        const auto psi = random_state(rng, 2);
        const auto a0 = random_state(rng, 2);
        const auto a1 = random_state(rng, 2);
        const StateVector initial =
            product_state(full_dims(circuit), {basis2(0), basis2(0), psi, a0, a1});
        const ExecutionResult res = run_circuit(circuit, gates, initial);

        const ComplexMatrix pi0 = product_of_permutation(gates.gates, inst.perms[0].order);
        const StateVector expected = product_state(
            full_dims(circuit), {basis2(y1), basis2(y2), apply2(pi0, psi),
                                 apply2(gates.gates[0].matrix, a0),
                                 apply2(gates.gates[1].matrix, a1)});
        CHECK(overlap_abs(expected.amps, res.final_state.amps) >= 1.0 - 1e-9);
    }
}

TEST_CASE("minimal circuit on all-identity gates measures (0, 0)") {
    const CausalCircuit circuit = build_min_pair_circuit();
    const ExecutionResult res = run_circuit(circuit, gates_of({id2(), id2(), id2()}),
                                            StateVector::zeros_basis(full_dims(circuit)));
    CHECK(res.outcomes == std::vector<int>{0, 0});
    CHECK(res.ledger.total == 5);
}

TEST_CASE("minimal circuit on random synthesized gates for every label") {
    const CausalCircuit circuit = build_min_pair_circuit();
    const TreePtr tree = parse_tree_spec("pair(slot1:pair)");
    std::mt19937_64 rng(113);
    for (int trial = 0; trial < 50; ++trial) {
        const std::vector<int> labels = {static_cast<int>(rng() % 2),
                                         static_cast<int>(rng() % 2)};
        SynthesisOptions opts;
        opts.randomize_rotations = true;
        opts.seed = rng();
        auto synth = synthesize_gates(*tree, labels, opts);
        REQUIRE(synth.ok());
        const ExecutionResult res =
            run_circuit(circuit, *synth.gates, StateVector::zeros_basis(full_dims(circuit)));
        CHECK(res.outcomes == labels);
        CHECK(res.ledger.total == 5);
    }
}

TEST_CASE("one-control circuit on random conjugated gate families") {
    // Gate triples built from a random frame: commuting family for label 0,
    // the identity/x/iy family for label 1.
    const CausalCircuit circuit = build_min_triple_circuit();
    std::mt19937_64 rng(127);
    const ComplexMatrix iy = sy().scaled(cplx{0.0, 1.0});
    for (int trial = 0; trial < 50; ++trial) {
        const ComplexMatrix u = random_unitary(rng);
        auto conj = [&](const ComplexMatrix& m) { return matmul(matmul(u, m), u.dagger()); };
        const int y = static_cast<int>(rng() % 2);
        const GateAssignment gates =
            y == 0 ? gates_of({conj(sz()), conj(sx()), conj(sx())})
                   : gates_of({id2(), conj(sx()), conj(iy)});
        REQUIRE(verify_promise(triple_hpp(), gates) == std::vector<int>{y});
        const ExecutionResult res =
            run_circuit(circuit, gates, StateVector::zeros_basis(full_dims(circuit)));
        CHECK(res.outcomes == std::vector<int>{y});
        CHECK(res.ledger.total == 5);
    }
}

TEST_CASE("the one-control minimal circuit solves the triple rows with five calls") {
    const CausalCircuit circuit = build_min_triple_circuit();
    CHECK(structural_query_count(circuit) == 5);
    const HppInstance inst = triple_hpp();
    std::mt19937_64 rng(97);
    for (int y = 0; y < 2; ++y) {
        const GateAssignment gates = table_triple_row(y);
        const auto psi = random_state(rng, 2);
        const auto a0 = random_state(rng, 2);
        const auto a1 = random_state(rng, 2);
        const StateVector initial =
            product_state(full_dims(circuit), {basis2(0), psi, a0, a1});
        const ExecutionResult res = run_circuit(circuit, gates, initial);
        CHECK(res.outcomes == std::vector<int>{y});
        CHECK(res.ledger.per_gate == std::vector<long long>{2, 2, 1});

        const ComplexMatrix pi0 = product_of_permutation(gates.gates, inst.perms[0].order);
        const StateVector expected = product_state(
            full_dims(circuit), {basis2(y), apply2(pi0, psi),
                                 apply2(gates.gates[0].matrix, a0),
                                 apply2(gates.gates[1].matrix, a1)});
        CHECK(overlap_abs(expected.amps, res.final_state.amps) >= 1.0 - 1e-9);
    }
}

TEST_CASE("switch simulation: pair instance costs four calls") {
    const HppInstance inst = pair_hpp();
    const CausalCircuit circuit = build_sim_switch_circuit(inst);
    CHECK(structural_query_count(circuit) == 4);
    for (int y = 0; y < 2; ++y) {
        const ExecutionResult res = run_circuit(circuit, table_pair_row(y),
                                                StateVector::zeros_basis(full_dims(circuit)));
        CHECK(res.outcomes == std::vector<int>{y});
        CHECK(res.ledger.total == 4);
    }
}

TEST_CASE("switch simulation: nested instance costs nine calls") {
    const HppInstance inst = min_pair_instance();
    const CausalCircuit circuit = build_sim_switch_circuit(inst);
    for (int y1 = 0; y1 < 2; ++y1)
        for (int y2 = 0; y2 < 2; ++y2) {
            const ExecutionResult res = run_circuit(circuit, table_nested_row(y1, y2),
                                                    StateVector::zeros_basis(full_dims(circuit)));
            CHECK(decode_label(res.outcomes.at(0), inst.label_shape) ==
                  std::vector<int>{y1, y2});
            CHECK(res.ledger.total == 9);
            CHECK(res.ledger.per_gate == std::vector<long long>{3, 3, 3});
        }
    const ExecutionResult res =
        run_circuit(circuit, gates_of({id2(), id2(), id2()}),
                    StateVector::zeros_basis(full_dims(circuit)));
    CHECK(res.outcomes == std::vector<int>{0});
}

TEST_CASE("switch simulation leaves auxiliaries in (U_g)^(n-1) |a_g>") {
    std::mt19937_64 rng(101);
    for (int n = 2; n <= 6; ++n) {
        const TreePtr tree = balanced_pair_tree(n);
        const HppInstance inst = build_from_tree(*tree);
        const auto labels = random_satisfiable_labels(*tree, rng);
        auto synth = synthesize_gates(*tree, labels);
        REQUIRE(synth.ok());

        const CausalCircuit circuit = build_sim_switch_circuit(inst);
        std::vector<std::vector<cplx>> factors;
        factors.push_back({std::vector<cplx>(static_cast<size_t>(inst.n_x), cplx{0.0, 0.0})});
        factors[0][0] = 1.0;
        const auto psi = random_state(rng, 2);
        factors.push_back(psi);
        std::vector<std::vector<cplx>> aux;
        for (int g = 0; g < n; ++g) {
            aux.push_back(random_state(rng, 2));
            factors.push_back(aux.back());
        }
        const ExecutionResult res =
            run_circuit(circuit, *synth.gates, product_state(full_dims(circuit), factors));

        const ComplexMatrix pi0 = product_of_permutation(synth.gates->gates,
                                                         inst.perms[0].order);
        std::vector<std::vector<cplx>> expect_factors;
        std::vector<cplx> ctrl(static_cast<size_t>(inst.n_x), cplx{0.0, 0.0});
        ctrl[static_cast<size_t>(encode_label(labels, inst.label_shape))] = 1.0;
        expect_factors.push_back(ctrl);
        expect_factors.push_back(apply2(pi0, psi));
        for (int g = 0; g < n; ++g) {
            expect_factors.push_back(apply2(
                matrix_power(synth.gates->gates[static_cast<size_t>(g)].matrix, n - 1),
                aux[static_cast<size_t>(g)]));
        }
        const StateVector expected = product_state(full_dims(circuit), expect_factors);
        CHECK(overlap_abs(expected.amps, res.final_state.amps) >= 1.0 - 1e-9);
        CHECK(res.ledger.total == static_cast<long long>(n) * n);
    }
}

TEST_CASE("query_bound values") {
    CHECK(query_bound(*balanced_pair_tree(4)) == doctest::Approx(16.0));
    CHECK(query_bound(*balanced_pair_tree(2)) == doctest::Approx(4.0));
    const TreePtr mixed = parse_tree_spec("triple(slot0:triple)");
    CHECK(query_bound(*mixed) == doctest::Approx(4.0 * 5.0 * std::log2(5.0)));
    const TreePtr lone = make_two_perm_node(4);
    CHECK(query_bound(*lone) == doctest::Approx(2.0 * 3.0 * 4.0 * 2.0));
}

TEST_CASE("recursive solver: worked instances and ledgers") {
    const TreePtr nested = parse_tree_spec("pair(slot1:pair)");
    for (int y1 = 0; y1 < 2; ++y1)
        for (int y2 = 0; y2 < 2; ++y2) {
            const CausalReport rep = recursive_solve(*nested, table_nested_row(y1, y2));
            CHECK(rep.recovered_y == std::vector<int>{y1, y2});
            CHECK(rep.ledger.total == 6);
            CHECK(rep.ledger.total <= rep.bound_value);
        }

    const CausalReport base = recursive_solve(*make_pair_node(), table_pair_row(1));
    CHECK(base.recovered_y == std::vector<int>{1});
    CHECK(base.ledger.total == 4);

    const TreePtr eight = balanced_pair_tree(8);
    auto synth = synthesize_gates(*eight, std::vector<int>(7, 1));
    REQUIRE(synth.ok());
    const CausalReport rep8 = recursive_solve(*eight, *synth.gates);
    CHECK(rep8.ledger.total == 32);
    CHECK(rep8.bound_value == doctest::Approx(48.0));
    CHECK(rep8.recovered_y == std::vector<int>(7, 1));
}

TEST_CASE("recursive solver matches verification on random trees up to 12 leaves") {
    std::mt19937_64 rng(103);
    for (int trial = 0; trial < 40; ++trial) {
        const int leaves = 2 + static_cast<int>(rng() % 11);
        const TreePtr tree = random_tree(rng, leaves);
        const HppInstance inst = build_from_tree(*tree);
        const auto labels = random_satisfiable_labels(*tree, rng);
        SynthesisOptions opts;
        opts.randomize_rotations = true;
        opts.seed = rng();
        auto synth = synthesize_gates(*tree, labels, opts);
        REQUIRE(synth.ok());

        const CausalReport rep = recursive_solve(*tree, *synth.gates);
        CHECK(rep.recovered_y == labels);
        CHECK(rep.recovered_y == verify_promise(inst, *synth.gates));
        CHECK(static_cast<double>(rep.ledger.total) <= rep.bound_value);
        CHECK(rep.ledger.total >= 2 * leaves - 1);
        long long from_gates = 0;
        for (long long c : rep.ledger.per_gate) from_gates += c;
        CHECK(from_gates == rep.ledger.total);
    }
}

TEST_CASE("root stage: moving blocks end in odd powers of their reference product") {
    std::mt19937_64 rng(107);
    const TreePtr tree = parse_tree_spec("triple(slot0:pair,slot2:triple)");
    const auto labels = random_satisfiable_labels(*tree, rng);
    auto synth = synthesize_gates(*tree, labels);
    REQUIRE(synth.ok());

    const RootStage stage = build_root_stage(*tree, *synth.gates);
    CHECK(stage.j == 2);  // the three-gate child is the largest block
    CHECK(stage.block_sizes == std::vector<int>{2, 1, 3});

    // Initial state: control |0>, target random, one random state per moving
    // block auxiliary.
    std::vector<std::vector<cplx>> factors{basis2(0)};
    const auto psi = random_state(rng, 2);
    factors.push_back(psi);
    std::vector<std::vector<cplx>> aux;
    for (int i = 0; i < stage.block_count; ++i) {
        if (i == stage.j) continue;
        aux.push_back(random_state(rng, 2));
        factors.push_back(aux.back());
    }
    const ExecutionResult res = run_circuit(stage.circuit, *synth.gates,
                                            product_state(full_dims(stage.circuit), factors));
    CHECK(res.outcomes.size() == 1);
    CHECK(res.outcomes[0] == labels[0]);

    // Moving blocks fire 2(k-1) times and miss their own content once:
    // auxiliary i ends in (Pi^(i)_0)^(2(k-1)-1) |a_i>.
    const int k = stage.block_count;
    ComplexMatrix whole = ComplexMatrix::identity(2);
    for (int i = 0; i < k; ++i) whole = matmul(stage.block_pi0[static_cast<size_t>(i)], whole);
    std::vector<std::vector<cplx>> expect{basis2(labels[0]), apply2(whole, psi)};
    size_t aux_idx = 0;
    for (int i = 0; i < k; ++i) {
        if (i == stage.j) continue;
        expect.push_back(apply2(matrix_power(stage.block_pi0[static_cast<size_t>(i)],
                                             2 * (k - 1) - 1),
                                aux[aux_idx++]));
    }
    const StateVector expected = product_state(full_dims(stage.circuit), expect);
    CHECK(overlap_abs(expected.amps, res.final_state.amps) >= 1.0 - 1e-9);

    // Stage ledger: every moving block's gates fire 2(k-1) times, block j not
    // at all (its calls are paid inside its own sub-solve).
    long long stage_calls = 0;
    for (const auto& instr : stage.circuit.instructions) {
        if (std::holds_alternative<InstrBlackBox>(instr)) ++stage_calls;
    }
    CHECK(stage_calls == 2 * (k - 1) * (2 + 1));
}

TEST_CASE("cross-solver agreement on shared instances") {
    std::mt19937_64 rng(109);
    for (int trial = 0; trial < 10; ++trial) {
        const TreePtr tree = random_tree(rng, 4 + trial % 4);
        const HppInstance inst = build_from_tree(*tree);
        const auto labels = random_satisfiable_labels(*tree, rng);
        auto synth = synthesize_gates(*tree, labels);
        REQUIRE(synth.ok());

        const auto direct = verify_promise(inst, *synth.gates);
        const SwitchReport sw = switch_solve(inst, *synth.gates);
        const CausalCircuit sim = build_sim_switch_circuit(inst);
        const ExecutionResult simres =
            run_circuit(sim, *synth.gates, StateVector::zeros_basis(full_dims(sim)));
        const CausalReport rec = recursive_solve(*tree, *synth.gates);

        CHECK(direct == labels);
        CHECK(sw.recovered_y == labels);
        CHECK(decode_label(simres.outcomes.at(0), inst.label_shape) == labels);
        CHECK(rec.recovered_y == labels);
        CHECK(simres.ledger.total == static_cast<long long>(inst.n) * inst.n);
    }
}

TEST_CASE("ledger equals the structural black-box count on every circuit") {
    const HppInstance inst = min_pair_instance();
    for (const CausalCircuit& circuit :
         {build_min_pair_circuit(), build_min_triple_circuit(), build_sim_switch_circuit(inst)}) {
        const ExecutionResult res = run_circuit(circuit, table_nested_row(1, 1),
                                                StateVector::zeros_basis(full_dims(circuit)));
        CHECK(res.ledger.total == structural_query_count(circuit));
    }
}

TEST_CASE("promise-violating gates make circuit measurements non-deterministic") {
    const ComplexMatrix skew = (sx() + sz()).scaled(1.0 / std::sqrt(2.0));
    const GateAssignment bad = gates_of({sx(), skew, id2()});
    const CausalCircuit circuit = build_min_pair_circuit();
    CHECK_THROWS_AS(run_circuit(circuit, bad, StateVector::zeros_basis(full_dims(circuit))),
                    NonDeterministicMeasurement);
}
