// Copyright 2026 The qhybrid Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "qhybrid/ansatz.hpp"

#include <cstdio>
#include <numbers>
#include <sstream>

#include "qhybrid/errors.hpp"
#include "qhybrid/random.hpp"

namespace qhybrid {

std::size_t param_count(std::size_t n_qubits, std::size_t layers) {
    if (n_qubits < 2) {
        throw ConfigError("ansatz needs at least 2 qubits, got " + std::to_string(n_qubits));
    }
    if (n_qubits > kMaxQubits) {
        throw ConfigError("ansatz qubit count exceeds " + std::to_string(kMaxQubits));
    }
    if (layers < 1) {
        throw ConfigError("ansatz needs at least 1 layer");
    }
    return 2 * (n_qubits - 1) * layers;
}

std::size_t CircuitProgram::trainable_count() const {
    std::size_t k = 0;
    for (const GateOp &op : ops) {
        k += op.param_slot ? 1 : 0;
    }
    return k;
}

std::size_t CircuitProgram::count(GateKind kind) const {
    std::size_t k = 0;
    for (const GateOp &op : ops) {
        k += op.kind == kind ? 1 : 0;
    }
    return k;
}

CircuitProgram build_circuit(const AnsatzConfig &cfg) {
    CircuitProgram program;
    program.n_qubits = cfg.n_qubits;
    program.num_slots = param_count(cfg.n_qubits, cfg.layers);

    if (cfg.initial_fixed_rotation) {
        for (std::size_t q = 0; q < cfg.n_qubits; ++q) {
            program.ops.push_back({.kind = GateKind::RY, .target = q, .fixed_angle = kInitialRotation});
        }
    }
    std::size_t slot = 0;
    for (std::size_t layer = 0; layer < cfg.layers; ++layer) {
        for (std::size_t parity = 0; parity < 2; ++parity) {
            for (std::size_t q = parity; q + 1 < cfg.n_qubits; q += 2) {
                program.ops.push_back({.kind = GateKind::CZ, .target = q + 1, .control = q});
                program.ops.push_back({.kind = GateKind::RY, .target = q, .param_slot = slot++});
                program.ops.push_back({.kind = GateKind::RY, .target = q + 1, .param_slot = slot++});
            }
        }
    }
    return program;
}

CircuitProgram build_circuit(const AnsatzConfig &cfg, std::span<const double> params) {
    CircuitProgram program = build_circuit(cfg);
    if (params.size() != program.num_slots) {
        throw ConfigError("ansatz expects " + std::to_string(program.num_slots) + " parameters, got " +
                          std::to_string(params.size()));
    }
    return program;
}

void apply_program(StateVector &state, const CircuitProgram &program, std::span<const double> params) {
    if (state.num_qubits() != program.n_qubits) {
        throw SizeError("state has " + std::to_string(state.num_qubits()) + " qubits, program expects " +
                        std::to_string(program.n_qubits));
    }
    for (const GateOp &op : program.ops) {
        apply_gate_inplace(state, op, params);
    }
}

StateVector apply_ansatz(StateVector state, const AnsatzConfig &cfg, std::span<const double> params) {
    const CircuitProgram program = build_circuit(cfg, params);
    apply_program(state, program, params);
    return state;
}

std::string to_text(const CircuitProgram &program, std::span<const double> params) {
    std::ostringstream out;
    char buf[64];
    for (const GateOp &op : program.ops) {
        out << gate_name(op.kind);
        if (op.control) {
            out << " q" << *op.control;
        }
        out << " q" << op.target;
        if (op.param_slot) {
            out << " slot=" << *op.param_slot;
            if (!params.empty()) {
                std::snprintf(buf, sizeof buf, " theta=%.10f", params[*op.param_slot]);
                out << buf;
            }
        } else if (op.kind == GateKind::RY) {
            std::snprintf(buf, sizeof buf, " fixed=%.10f", op.fixed_angle);
            out << buf;
        }
        out << '\n';
    }
    return out.str();
}

std::vector<double> init_params(const AnsatzConfig &cfg, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> theta(param_count(cfg.n_qubits, cfg.layers));
    for (double &t : theta) {
        t = rng.uniform(-std::numbers::pi, std::numbers::pi);
    }
    return theta;
}

} // namespace qhybrid
