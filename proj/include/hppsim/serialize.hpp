#pragma once

#include <string>

#include "json.hpp"

#include "hppsim/causal.hpp"
#include "hppsim/instance.hpp"

namespace hppsim {

// Instance file schema:
// { n, n_x, gate_dim, perms: [[int]], signs: [[+-1]], label_shape: [int], tree: string }
nlohmann::json instance_to_json(const HppInstance& inst);
HppInstance instance_from_json(const nlohmann::json& j);

// Gates file schema: { gates: [ [[ [re, im], [re, im] ], [ ... ]] ] }
nlohmann::json gates_to_json(const GateAssignment& gates);
GateAssignment gates_from_json(const nlohmann::json& j, double unitarity_tol = kDefaultTol);

// Circuit IR dump for --dump-circuit (one-way; inspection only).
nlohmann::json circuit_to_json(const CausalCircuit& circuit);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace hppsim
