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

#include <span>
#include <vector>

#include "qhybrid/ansatz.hpp"
#include "qhybrid/qstate.hpp"

namespace qhybrid {

/// <Z_q> for every qubit q, each in [-1, 1].
[[nodiscard]] std::vector<double> expect_z_all(const StateVector &state);

/// Gradients of E = sum_q upstream[q] <Z_q>.
struct QuantumGradients {
    /// dE/dtheta, one entry per parameter slot.
    std::vector<double> d_theta;
    /// dE/d(Re a_i) for each amplitude a_i of the input state (length 2^n).
    std::vector<double> d_input;
};

/// Shift rule: dE/dtheta_j = (E(theta_j + pi/2) - E(theta_j - pi/2)) / 2.
/// Costs two full circuit runs per parameter.
[[nodiscard]] std::vector<double> parameter_shift_grad(const CircuitProgram &program, std::span<const double> params,
                                                       const StateVector &input, std::span<const double> upstream);

[[nodiscard]] std::vector<double> parameter_shift_grad(const AnsatzConfig &cfg, std::span<const double> params,
                                                       const StateVector &input, std::span<const double> upstream);

/// Reverse-sweep differentiation: one forward pass, then the state and the
/// adjoint vector O|psi> are un-computed gate by gate. Each RY slot picks
/// up Re <lambda| (-iY) |phi>. Also returns d_input = 2 Re(U^dag O U psi).
[[nodiscard]] QuantumGradients adjoint_grad(const CircuitProgram &program, std::span<const double> params,
                                            const StateVector &input, std::span<const double> upstream);

[[nodiscard]] QuantumGradients adjoint_grad(const AnsatzConfig &cfg, std::span<const double> params,
                                            const StateVector &input, std::span<const double> upstream);

} // namespace qhybrid
