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
#include "qhybrid/measurement.hpp"

#include <numbers>
#include <string>

#include "qhybrid/errors.hpp"
#include "qhybrid/kernels.hpp"

namespace qhybrid {

namespace {

void check_upstream(const StateVector &input, std::span<const double> upstream) {
    if (upstream.size() != input.num_qubits()) {
        throw SizeError("upstream length " + std::to_string(upstream.size()) + " != qubit count " +
                        std::to_string(input.num_qubits()));
    }
}

double weighted_expectation(const StateVector &state, std::span<const double> upstream) {
    const std::vector<double> z = expect_z_all(state);
    double e = 0.0;
    for (std::size_t q = 0; q < z.size(); ++q) {
        e += upstream[q] * z[q];
    }
    return e;
}

} // namespace

std::vector<double> expect_z_all(const StateVector &state) {
    std::vector<double> out(state.num_qubits());
    kernels::expect_z_all(state.amplitudes(), state.num_qubits(), out);
    return out;
}

std::vector<double> parameter_shift_grad(const CircuitProgram &program, std::span<const double> params,
                                         const StateVector &input, std::span<const double> upstream) {
    check_upstream(input, upstream);
    if (params.size() != program.num_slots) {
        throw ConfigError("parameter count mismatch");
    }
    constexpr double shift = std::numbers::pi / 2.0;
    std::vector<double> shifted(params.begin(), params.end());
    std::vector<double> grad(params.size(), 0.0);
    for (std::size_t j = 0; j < params.size(); ++j) {
        shifted[j] = params[j] + shift;
        StateVector plus = input;
        apply_program(plus, program, shifted);
        shifted[j] = params[j] - shift;
        StateVector minus = input;
        apply_program(minus, program, shifted);
        shifted[j] = params[j];
        grad[j] = 0.5 * (weighted_expectation(plus, upstream) - weighted_expectation(minus, upstream));
    }
    return grad;
}

std::vector<double> parameter_shift_grad(const AnsatzConfig &cfg, std::span<const double> params,
                                         const StateVector &input, std::span<const double> upstream) {
    return parameter_shift_grad(build_circuit(cfg, params), params, input, upstream);
}

QuantumGradients adjoint_grad(const CircuitProgram &program, std::span<const double> params,
                              const StateVector &input, std::span<const double> upstream) {
    check_upstream(input, upstream);
    if (params.size() != program.num_slots) {
        throw ConfigError("parameter count mismatch");
    }
    StateVector phi = input;
    apply_program(phi, program, params);

    StateVector lambda(phi.num_qubits());
    kernels::apply_z_sum(phi.amplitudes(), lambda.amplitudes(), upstream);

    QuantumGradients out;
    out.d_theta.assign(params.size(), 0.0);
    for (auto it = program.ops.rbegin(); it != program.ops.rend(); ++it) {
        const GateOp &op = *it;
        if (op.param_slot) {
            // d/dtheta RY = (-i/2) Y RY, so dE/dtheta = 2 Re <lambda|(-i/2)Y|phi>
            out.d_theta[*op.param_slot] +=
                kernels::ry_generator_overlap(lambda.amplitudes(), phi.amplitudes(), op.target);
        }
        apply_gate_adjoint_inplace(phi, op, params);
        apply_gate_adjoint_inplace(lambda, op, params);
    }

    out.d_input.resize(lambda.size());
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        out.d_input[i] = 2.0 * lambda[i].real();
    }
    return out;
}

QuantumGradients adjoint_grad(const AnsatzConfig &cfg, std::span<const double> params, const StateVector &input,
                              std::span<const double> upstream) {
    return adjoint_grad(build_circuit(cfg, params), params, input, upstream);
}

} // namespace qhybrid
