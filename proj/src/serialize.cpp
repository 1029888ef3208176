#include "hppsim/serialize.hpp"

#include <bit>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hppsim {

using nlohmann::json;

json instance_to_json(const HppInstance& inst) {
    json j;
    j["n"] = inst.n;
    j["n_x"] = inst.n_x;
    j["gate_dim"] = inst.gate_dim;
    json perms = json::array();
    for (const auto& p : inst.perms) perms.push_back(p.order);
    j["perms"] = std::move(perms);
    json signs = json::array();
    for (int y = 0; y < inst.signs.size(); ++y) {
        json row = json::array();
        for (int x = 0; x < inst.signs.size(); ++x) row.push_back(inst.signs.sign(x, y));
        signs.push_back(std::move(row));
    }
    j["signs"] = std::move(signs);
    j["label_shape"] = inst.label_shape;
    j["tree"] = inst.tree_spec;
    return j;
}

HppInstance instance_from_json(const json& j) {
    HppInstance inst;
    inst.n = j.at("n").get<int>();
    inst.n_x = j.at("n_x").get<int>();
    inst.gate_dim = j.at("gate_dim").get<int>();
    for (const auto& row : j.at("perms")) {
        Permutation p;
        p.order = row.get<std::vector<int>>();
        inst.perms.push_back(std::move(p));
    }
    const auto& signs = j.at("signs");
    if (static_cast<int>(signs.size()) != inst.n_x) {
        throw std::invalid_argument("instance: sign matrix size mismatch");
    }
    inst.signs = SignMatrix(inst.n_x);
    for (int y = 0; y < inst.n_x; ++y) {
        const auto& row = signs.at(static_cast<size_t>(y));
        if (static_cast<int>(row.size()) != inst.n_x) {
            throw std::invalid_argument("instance: sign matrix row length mismatch");
        }
        for (int x = 0; x < inst.n_x; ++x) {
            inst.signs.set(x, y, row.at(static_cast<size_t>(x)).get<int>());
        }
    }
    inst.label_shape = j.at("label_shape").get<std::vector<int>>();
    if (j.contains("tree")) inst.tree_spec = j.at("tree").get<std::string>();
    inst.validate();
    if (inst.n_x <= 4096 && !is_hadamard(inst.signs)) {
        throw std::invalid_argument("instance: sign matrix is not Hadamard");
    }
    // Re-detect the structured form lost by entrywise construction.
    if ((inst.n_x & (inst.n_x - 1)) == 0 && inst.n_x <= 4096) {
        bool sylv = true;
        for (int y = 0; sylv && y < inst.n_x; ++y) {
            for (int x = 0; x < inst.n_x; ++x) {
                const int want = std::popcount(static_cast<unsigned>(x & y)) & 1 ? -1 : 1;
                if (inst.signs.sign(x, y) != want) {
                    sylv = false;
                    break;
                }
            }
        }
        inst.signs.mark_sylvester(sylv);
    }
    return inst;
}

json gates_to_json(const GateAssignment& gates) {
    json list = json::array();
    for (const auto& g : gates.gates) {
        json rows = json::array();
        for (int r = 0; r < g.dim(); ++r) {
            json row = json::array();
            for (int c = 0; c < g.dim(); ++c) {
                row.push_back({g.matrix.at(r, c).real(), g.matrix.at(r, c).imag()});
            }
            rows.push_back(std::move(row));
        }
        list.push_back(std::move(rows));
    }
    return json{{"gates", std::move(list)}};
}

GateAssignment gates_from_json(const json& j, double unitarity_tol) {
    GateAssignment out;
    for (const auto& g : j.at("gates")) {
        const int dim = static_cast<int>(g.size());
        ComplexMatrix m(dim, dim);
        for (int r = 0; r < dim; ++r) {
            const auto& row = g.at(static_cast<size_t>(r));
            if (static_cast<int>(row.size()) != dim) {
                throw std::invalid_argument("gates: ragged matrix");
            }
            for (int c = 0; c < dim; ++c) {
                const auto& entry = row.at(static_cast<size_t>(c));
                m.at(r, c) = cplx{entry.at(0).get<double>(), entry.at(1).get<double>()};
            }
        }
        out.gates.emplace_back(std::move(m), unitarity_tol);
    }
    return out;
}

json circuit_to_json(const CausalCircuit& circuit) {
    json j;
    json regs = json::array();
    for (const auto& r : circuit.registers) regs.push_back({{"name", r.name}, {"dim", r.dim}});
    j["registers"] = std::move(regs);
    j["num_gates"] = circuit.num_gates;
    json instrs = json::array();
    for (const auto& instr : circuit.instructions) {
        json e;
        if (const auto* h = std::get_if<InstrHadamard>(&instr)) {
            e["op"] = h->inverse ? "inv_hadamard" : "hadamard";
            e["reg"] = h->reg;
        } else if (const auto* sw = std::get_if<InstrControlledSwap>(&instr)) {
            e["op"] = "cswap";
            e["control_reg"] = sw->control_reg;
            json accept = json::array();
            for (size_t v = 0; v < sw->accept.size(); ++v) {
                if (sw->accept[v]) accept.push_back(v);
            }
            e["accept_values"] = std::move(accept);
            e["wire_a"] = sw->wire_a;
            e["wire_b"] = sw->wire_b;
        } else if (const auto* bb = std::get_if<InstrBlackBox>(&instr)) {
            e["op"] = "blackbox";
            e["gate"] = bb->gate;
            e["wire"] = bb->wire;
        } else if (const auto* fx = std::get_if<InstrFixedUnitary>(&instr)) {
            e["op"] = "fixed_unitary";
            e["label"] = fx->label;
            e["wire"] = fx->wire;
            json rows = json::array();
            for (int r = 0; r < fx->matrix.rows(); ++r) {
                json row = json::array();
                for (int c = 0; c < fx->matrix.cols(); ++c) {
                    row.push_back({fx->matrix.at(r, c).real(), fx->matrix.at(r, c).imag()});
                }
                rows.push_back(std::move(row));
            }
            e["matrix"] = std::move(rows);
        } else if (const auto* m = std::get_if<InstrMeasure>(&instr)) {
            e["op"] = "measure";
            e["reg"] = m->reg;
        }
        instrs.push_back(std::move(e));
    }
    j["instructions"] = std::move(instrs);
    return j;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << text;
}

}  // namespace hppsim
