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
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "oracle.hpp"
#include "qhybrid/ansatz.hpp"
#include "qhybrid/embedding.hpp"
#include "qhybrid/measurement.hpp"

namespace {

using namespace qhybrid;

// E(theta) = sum_q u_q <Z_q> through the dense oracle.
double oracle_energy(const CircuitProgram &p, std::span<const double> params, const StateVector &in,
                     std::span<const double> u) {
    const std::vector<Complex> start(in.amplitudes().begin(), in.amplitudes().end());
    const auto out = oracle::simulate(p.ops, p.n_qubits, params, start);
    const std::vector<double> z = oracle::expect_z(out, p.n_qubits);
    double e = 0.0;
    for (std::size_t q = 0; q < z.size(); ++q) {
        e += u[q] * z[q];
    }
    return e;
}

struct Case {
    AnsatzConfig cfg;
    std::vector<double> params;
    StateVector input;
    std::vector<double> upstream;
};

Case random_case(Rng &rng, std::size_t max_n, std::size_t max_l) {
    AnsatzConfig cfg{2 + rng.index(max_n - 1), 1 + rng.index(max_l), rng.index(2) == 1};
    std::vector<double> x(std::size_t{1} << cfg.n_qubits);
    for (double &v : x) {
        v = rng.normal();
    }
    std::vector<double> u(cfg.n_qubits);
    for (double &v : u) {
        v = rng.uniform(-1.0, 1.0);
    }
    auto params = init_params(cfg, rng.next());
    return {cfg, std::move(params), amplitude_embed(x, {cfg.n_qubits}), std::move(u)};
}

TEST(ExpectZ, Examples) {
    EXPECT_EQ(expect_z_all(zero_state(1)), std::vector<double>{1.0});
    EXPECT_EQ(expect_z_all(StateVector(1, {0.0, 1.0})), std::vector<double>{-1.0});
    for (int k = 0; k <= 12; ++k) {
        const double theta = k * std::numbers::pi / 6.0;
        const std::vector<double> params{theta};
        StateVector s = zero_state(1);
        apply_gate_inplace(s, {.kind = GateKind::RY, .target = 0, .param_slot = 0}, params);
        EXPECT_NEAR(expect_z_all(s)[0], std::cos(theta), 1e-12);
    }
}

TEST(ExpectZ, BoundsAndOracle) {
    Rng rng(1);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + rng.index(8);
        const StateVector s(n, oracle::random_state(n, rng));
        const std::vector<double> z = expect_z_all(s);
        const std::vector<double> ref = oracle::expect_z(s.amplitudes(), n);
        for (std::size_t q = 0; q < n; ++q) {
            EXPECT_LE(std::abs(z[q]), 1.0 + 1e-10);
            EXPECT_NEAR(z[q], ref[q], 1e-12);
        }
    }
}

TEST(Gradients, SingleRotationExamples) {
    CircuitProgram p;
    p.n_qubits = 1;
    p.num_slots = 1;
    p.ops.push_back({.kind = GateKind::RY, .target = 0, .param_slot = 0});
    const std::vector<double> u{1.0};
    for (double theta : {0.0, std::numbers::pi / 2.0, 1.1}) {
        const std::vector<double> params{theta};
        const double shift = parameter_shift_grad(p, params, zero_state(1), u)[0];
        const double adjoint = adjoint_grad(p, params, zero_state(1), u).d_theta[0];
        EXPECT_NEAR(shift, -std::sin(theta), 1e-12);
        EXPECT_NEAR(adjoint, -std::sin(theta), 1e-12);
    }
    const std::vector<double> half_pi{std::numbers::pi / 2.0};
    EXPECT_NEAR(parameter_shift_grad(p, half_pi, zero_state(1), u)[0], -1.0, 1e-12);
}

TEST(Gradients, EnginesAgree) {
    Rng rng(2);
    for (int trial = 0; trial < 150; ++trial) {
        const Case c = random_case(rng, 6, 3);
        const auto shift = parameter_shift_grad(c.cfg, c.params, c.input, c.upstream);
        const auto adjoint = adjoint_grad(c.cfg, c.params, c.input, c.upstream).d_theta;
        ASSERT_EQ(shift.size(), adjoint.size());
        for (std::size_t j = 0; j < shift.size(); ++j) {
            EXPECT_NEAR(shift[j], adjoint[j], 1e-8);
        }
    }
}

TEST(Gradients, FiniteDifferenceErrorShrinksWithStep) {
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const Case c = random_case(rng, 4, 2);
        const CircuitProgram p = build_circuit(c.cfg);
        const auto exact = adjoint_grad(p, c.params, c.input, c.upstream).d_theta;
        double err_coarse = 0.0;
        double err_fine = 0.0;
        for (std::size_t j = 0; j < exact.size(); ++j) {
            for (double h : {1e-3, 1e-4}) {
                std::vector<double> pp = c.params;
                std::vector<double> pm = c.params;
                pp[j] += h;
                pm[j] -= h;
                const double fd =
                    (oracle_energy(p, pp, c.input, c.upstream) - oracle_energy(p, pm, c.input, c.upstream)) / (2 * h);
                (h > 5e-4 ? err_coarse : err_fine) += std::abs(fd - exact[j]);
            }
        }
        EXPECT_LT(err_fine, err_coarse);
        EXPECT_LT(err_fine, 1e-7);
    }
}

TEST(Gradients, LinearInUpstream) {
    Rng rng(4);
    for (int trial = 0; trial < 50; ++trial) {
        Case c = random_case(rng, 5, 3);
        std::vector<double> u2(c.upstream.size());
        std::vector<double> sum(c.upstream.size());
        for (std::size_t q = 0; q < u2.size(); ++q) {
            u2[q] = rng.normal();
            sum[q] = c.upstream[q] + u2[q];
        }
        const auto g1 = adjoint_grad(c.cfg, c.params, c.input, c.upstream);
        const auto g2 = adjoint_grad(c.cfg, c.params, c.input, u2);
        const auto gs = adjoint_grad(c.cfg, c.params, c.input, sum);
        for (std::size_t j = 0; j < gs.d_theta.size(); ++j) {
            EXPECT_NEAR(gs.d_theta[j], g1.d_theta[j] + g2.d_theta[j], 1e-10);
        }
        for (std::size_t i = 0; i < gs.d_input.size(); ++i) {
            EXPECT_NEAR(gs.d_input[i], g1.d_input[i] + g2.d_input[i], 1e-10);
        }
        const auto s1 = parameter_shift_grad(c.cfg, c.params, c.input, c.upstream);
        const auto s2 = parameter_shift_grad(c.cfg, c.params, c.input, u2);
        const auto ss = parameter_shift_grad(c.cfg, c.params, c.input, sum);
        for (std::size_t j = 0; j < ss.size(); ++j) {
            EXPECT_NEAR(ss[j], s1[j] + s2[j], 1e-10);
        }
    }
}

// d_input is the gradient w.r.t. real input amplitudes, checked by
// perturbing the (unnormalized) input vector directly.
TEST(Gradients, InputGradientFiniteDifferences) {
    Rng rng(5);
    constexpr double h = 1e-6;
    for (int trial = 0; trial < 40; ++trial) {
        const Case c = random_case(rng, 4, 2);
        const CircuitProgram p = build_circuit(c.cfg);
        const auto g = adjoint_grad(p, c.params, c.input, c.upstream);
        ASSERT_EQ(g.d_input.size(), c.input.size());
        for (std::size_t i = 0; i < c.input.size(); ++i) {
            std::vector<Complex> plus(c.input.amplitudes().begin(), c.input.amplitudes().end());
            std::vector<Complex> minus = plus;
            plus[i] += h;
            minus[i] -= h;
            const double fd = (oracle_energy(p, c.params, StateVector(p.n_qubits, plus), c.upstream) -
                               oracle_energy(p, c.params, StateVector(p.n_qubits, minus), c.upstream)) /
                              (2 * h);
            EXPECT_NEAR(g.d_input[i], fd, 1e-7);
        }
    }
}

TEST(Gradients, InputGradientExample) {
    // Empty program, O = Z: E(a) = a0^2 - a1^2, so dE/da = (2 a0, -2 a1).
    CircuitProgram p;
    p.n_qubits = 1;
    const std::vector<double> u{1.0};
    const auto g = adjoint_grad(p, {}, StateVector(1, {0.6, 0.8}), u);
    EXPECT_NEAR(g.d_input[0], 1.2, 1e-15);
    EXPECT_NEAR(g.d_input[1], -1.6, 1e-15);
}

TEST(Gradients, LargeRegisterUsesParallelPathConsistently) {
    const AnsatzConfig cfg{14, 1, true};
    Rng rng(6);
    const std::vector<double> params = init_params(cfg, 9);
    const StateVector in(14, oracle::random_state(14, rng, true));
    std::vector<double> u(14);
    for (double &v : u) {
        v = rng.normal();
    }
    const auto adjoint = adjoint_grad(cfg, params, in, u).d_theta;
    const auto shift = parameter_shift_grad(cfg, params, in, u);
    for (std::size_t j = 0; j < shift.size(); ++j) {
        EXPECT_NEAR(adjoint[j], shift[j], 1e-8);
    }
}

} // namespace
