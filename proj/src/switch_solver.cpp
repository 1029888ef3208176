#include "hppsim/switch_solver.hpp"

#include <cmath>

namespace hppsim {

StateVector apply_n_switch(const HppInstance& inst, const GateAssignment& gates,
                           const StateVector& state) {
    inst.validate();
    if (static_cast<int>(gates.gates.size()) != inst.n) {
        throw std::invalid_argument("apply_n_switch: gate count mismatch");
    }
    if (state.dims != std::vector<int>{inst.n_x, inst.gate_dim}) {
        throw std::invalid_argument("apply_n_switch: state must be control (x) target");
    }
    state.validate();
    const int d = inst.gate_dim;
    StateVector out = state;
    for (int x = 0; x < inst.n_x; ++x) {
        const ComplexMatrix m = product_of_permutation(gates.gates, inst.perms[x].order);
        cplx* block = &out.amps[static_cast<size_t>(x) * d];
        cplx in[2] = {block[0], block[1]};
        for (int r = 0; r < d; ++r) {
            cplx acc{0.0, 0.0};
            for (int c = 0; c < d; ++c) acc += m.at(r, c) * in[c];
            block[r] = acc;
        }
    }
    return out;
}

SwitchReport switch_solve(const HppInstance& inst, const GateAssignment& gates,
                          std::span<const cplx> target_init) {
    inst.validate();
    const int d = inst.gate_dim;
    std::vector<cplx> psi(static_cast<size_t>(d), cplx{0.0, 0.0});
    if (target_init.empty()) {
        psi[0] = 1.0;
    } else {
        if (static_cast<int>(target_init.size()) != d) {
            throw std::invalid_argument("switch_solve: target state has wrong dimension");
        }
        psi.assign(target_init.begin(), target_init.end());
        double norm = 0.0;
        for (const auto& a : psi) norm += std::norm(a);
        if (std::abs(norm - 1.0) > kDefaultTol) {
            throw std::invalid_argument("switch_solve: target state not normalised");
        }
    }

    StateVector state;
    state.dims = {inst.n_x, d};
    state.amps.resize(static_cast<size_t>(inst.n_x) * d);
    const double scale = 1.0 / std::sqrt(static_cast<double>(inst.n_x));
    for (int x = 0; x < inst.n_x; ++x) {
        for (int t = 0; t < d; ++t) {
            state.amps[static_cast<size_t>(x) * d + t] = scale * psi[static_cast<size_t>(t)];
        }
    }

    state = apply_n_switch(inst, gates, state);

    // Inverse Hadamard transform on the control register, one target column
    // at a time.
    std::vector<cplx> column(static_cast<size_t>(inst.n_x));
    for (int t = 0; t < d; ++t) {
        for (int x = 0; x < inst.n_x; ++x) {
            column[static_cast<size_t>(x)] = state.amps[static_cast<size_t>(x) * d + t];
        }
        apply_hadamard_transform(inst.signs, column, /*inverse=*/true);
        for (int x = 0; x < inst.n_x; ++x) {
            state.amps[static_cast<size_t>(x) * d + t] = column[static_cast<size_t>(x)];
        }
    }

    int best = 0;
    double best_p = -1.0;
    for (int x = 0; x < inst.n_x; ++x) {
        double p = 0.0;
        for (int t = 0; t < d; ++t) p += std::norm(state.amps[static_cast<size_t>(x) * d + t]);
        if (p > best_p) {
            best_p = p;
            best = x;
        }
    }
    if (best_p < kReadoutThreshold) {
        throw ReadoutAmbiguous("switch readout is not deterministic (top probability " +
                               std::to_string(best_p) + "); promise violated?");
    }

    const ComplexMatrix pi0 = product_of_permutation(gates.gates, inst.perms[0].order);
    std::vector<cplx> expected_target(static_cast<size_t>(d), cplx{0.0, 0.0});
    for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) expected_target[r] += pi0.at(r, c) * psi[c];
    }

    SwitchReport report;
    report.query_count = inst.n;
    report.recovered_y = decode_label(best, inst.label_shape);
    double residual = 0.0;
    for (int x = 0; x < inst.n_x; ++x) {
        for (int t = 0; t < d; ++t) {
            const cplx want = x == best ? expected_target[static_cast<size_t>(t)] : cplx{0.0, 0.0};
            residual = std::max(residual,
                                std::abs(state.amps[static_cast<size_t>(x) * d + t] - want));
        }
    }
    report.residual = residual;
    report.final_target_fidelity = overlap_abs(
        expected_target, std::span<const cplx>(&state.amps[static_cast<size_t>(best) * d],
                                               static_cast<size_t>(d)));
    return report;
}

}  // namespace hppsim
