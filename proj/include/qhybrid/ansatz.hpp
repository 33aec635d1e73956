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
#pragma once

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "qhybrid/qstate.hpp"

namespace qhybrid {

/// Angle of the optional non-trainable RY layer emitted before layer 1.
inline constexpr double kInitialRotation = std::numbers::pi / 4.0;

/// Simplified 2-design ansatz on an open chain of n qubits.
struct AnsatzConfig {
    std::size_t n_qubits = 2;
    std::size_t layers = 1;
    bool initial_fixed_rotation = true;
};

/// Trainable angle count, 2(n-1)L. Throws ConfigError for n < 2 or L < 1.
[[nodiscard]] std::size_t param_count(std::size_t n_qubits, std::size_t layers);

struct CircuitProgram {
    std::size_t n_qubits = 0;
    std::vector<GateOp> ops;
    std::size_t num_slots = 0;

    [[nodiscard]] std::size_t trainable_count() const;
    [[nodiscard]] std::size_t count(GateKind kind) const;
};

/// Gate layout. Per layer: the even sublayer (pairs (q, q+1), q even) then
/// the odd sublayer (q odd); each pair emits CZ(q, q+1), RY on q, RY on q+1.
/// Slots are numbered in emission order.
[[nodiscard]] CircuitProgram build_circuit(const AnsatzConfig &cfg);

/// As above, checking that `params` has exactly param_count entries.
[[nodiscard]] CircuitProgram build_circuit(const AnsatzConfig &cfg, std::span<const double> params);

void apply_program(StateVector &state, const CircuitProgram &program, std::span<const double> params);

[[nodiscard]] StateVector apply_ansatz(StateVector state, const AnsatzConfig &cfg, std::span<const double> params);

/// One op per line: `CZ q0 q1`, `RY q0 slot=3` or `RY q0 fixed=0.7853981634`.
/// With params, trainable lines gain ` theta=<value>`.
[[nodiscard]] std::string to_text(const CircuitProgram &program, std::span<const double> params = {});

/// Uniform angles on [-pi, pi) from a seeded generator.
[[nodiscard]] std::vector<double> init_params(const AnsatzConfig &cfg, std::uint64_t seed);

} // namespace qhybrid
