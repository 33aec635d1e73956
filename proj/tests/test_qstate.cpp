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
#include "qhybrid/errors.hpp"
#include "qhybrid/kernels.hpp"
#include "qhybrid/measurement.hpp"
#include "qhybrid/qstate.hpp"

namespace {

using namespace qhybrid;

constexpr GateKind kAllKinds[] = {GateKind::I, GateKind::X, GateKind::Y,  GateKind::Z,
                                  GateKind::H, GateKind::RY, GateKind::CZ, GateKind::CNOT};

using oracle::random_gate;

StateVector from_oracle(std::size_t n, const std::vector<Complex> &amps) { return StateVector(n, amps); }

double state_diff(const StateVector &s, const std::vector<Complex> &ref) {
    return oracle::max_abs_diff(s.amplitudes(), ref);
}

TEST(ZeroState, BasisVector) {
    const StateVector s1 = zero_state(1);
    ASSERT_EQ(s1.size(), 2u);
    EXPECT_EQ(s1[0], Complex(1.0));
    EXPECT_EQ(s1[1], Complex(0.0));

    const StateVector s2 = zero_state(2);
    ASSERT_EQ(s2.size(), 4u);
    EXPECT_EQ(s2[0], Complex(1.0));
    for (std::size_t i = 1; i < 4; ++i) {
        EXPECT_EQ(s2[i], Complex(0.0));
    }

    const StateVector s3 = zero_state(3);
    ASSERT_EQ(s3.size(), 8u);
    EXPECT_EQ(s3[0], Complex(1.0));
    EXPECT_DOUBLE_EQ(s3.norm(), 1.0);
}

TEST(ZeroState, RejectsBadSizes) {
    EXPECT_THROW((void)zero_state(0), SizeError);
    EXPECT_THROW((void)zero_state(kMaxQubits + 1), SizeError);
    EXPECT_THROW(StateVector(2, std::vector<Complex>(3)), SizeError);
}

TEST(GateMatrix, Examples) {
    const CMatrix x = gate_matrix(GateKind::X);
    EXPECT_EQ(x(0, 0), Complex(0.0));
    EXPECT_EQ(x(0, 1), Complex(1.0));
    EXPECT_EQ(x(1, 0), Complex(1.0));
    EXPECT_EQ(x(1, 1), Complex(0.0));

    EXPECT_LE(gate_matrix(GateKind::RY, 0.0).max_abs_diff(CMatrix::identity(2)), 0.0);

    const CMatrix h = gate_matrix(GateKind::H);
    const double r = 1.0 / std::sqrt(2.0);
    EXPECT_NEAR(h(0, 0).real(), r, 1e-15);
    EXPECT_NEAR(h(0, 1).real(), r, 1e-15);
    EXPECT_NEAR(h(1, 0).real(), r, 1e-15);
    EXPECT_NEAR(h(1, 1).real(), -r, 1e-15);
}

TEST(GateMatrix, MatchesIndependentDefinitions) {
    const auto same = [](const CMatrix &m, const oracle::Dense &d) {
        double worst = 0.0;
        for (std::size_t r = 0; r < d.dim; ++r) {
            for (std::size_t c = 0; c < d.dim; ++c) {
                worst = std::max(worst, std::abs(m(r, c) - d(r, c)));
            }
        }
        return worst;
    };
    EXPECT_LE(same(gate_matrix(GateKind::Y), oracle::pauli_y()), 1e-15);
    EXPECT_LE(same(gate_matrix(GateKind::Z), oracle::pauli_z()), 1e-15);
    for (double t : {-2.0, 0.3, 1.7, 6.0}) {
        EXPECT_LE(same(gate_matrix(GateKind::RY, t), oracle::ry(t)), 1e-15);
    }
    // basis index 2*control + target, i.e. control is the high bit
    const oracle::Dense cz = oracle::controlled(oracle::pauli_z(), 1, 0, 2);
    const oracle::Dense cnot = oracle::controlled(oracle::pauli_x(), 1, 0, 2);
    EXPECT_LE(same(gate_matrix(GateKind::CZ), cz), 1e-15);
    EXPECT_LE(same(gate_matrix(GateKind::CNOT), cnot), 1e-15);
}

TEST(GateMatrix, Unitary) {
    for (GateKind k : kAllKinds) {
        for (double t : {0.0, 0.4, -2.5}) {
            const CMatrix u = gate_matrix(k, t);
            EXPECT_LE((u.adjoint() * u).max_abs_diff(CMatrix::identity(u.dim())), 1e-12) << gate_name(k);
        }
    }
}

TEST(GateMatrix, PauliAlgebra) {
    for (GateKind k : {GateKind::X, GateKind::Y, GateKind::Z, GateKind::H}) {
        const CMatrix m = gate_matrix(k);
        EXPECT_LE((m * m).max_abs_diff(CMatrix::identity(2)), 1e-15) << gate_name(k);
    }
}

TEST(ApplyGate, Examples) {
    const GateOp x0{.kind = GateKind::X, .target = 0};
    const StateVector one = apply_gate(zero_state(1), x0, {});
    EXPECT_EQ(one[0], Complex(0.0));
    EXPECT_EQ(one[1], Complex(1.0));

    // |10> means qubit 0 = 1 (written q0 first): index 1.
    StateVector s(2, {0.0, 1.0, 0.0, 0.0});
    const GateOp cnot{.kind = GateKind::CNOT, .target = 1, .control = 0};
    s = apply_gate(s, cnot, {});
    EXPECT_EQ(s[3], Complex(1.0));
    EXPECT_EQ(s[1], Complex(0.0));

    const double r = 1.0 / std::sqrt(3.0);
    StateVector w(2, {r, r, 0.0, r});
    const GateOp cz{.kind = GateKind::CZ, .target = 1, .control = 0};
    w = apply_gate(w, cz, {});
    const oracle::Dense diag = oracle::controlled(oracle::pauli_z(), 0, 1, 2);
    const std::vector<Complex> expected = oracle::matvec(diag, std::vector<Complex>{r, r, 0.0, r});
    EXPECT_LE(state_diff(w, expected), 1e-15);
    EXPECT_NEAR(w[3].real(), -r, 1e-15);
}

TEST(ApplyGate, RejectsBadIndices) {
    StateVector s = zero_state(2);
    EXPECT_THROW(apply_gate_inplace(s, {.kind = GateKind::X, .target = 2}, {}), IndexError);
    EXPECT_THROW(apply_gate_inplace(s, {.kind = GateKind::CZ, .target = 0, .control = 0}, {}), IndexError);
    EXPECT_THROW(apply_gate_inplace(s, {.kind = GateKind::CZ, .target = 0}, {}), IndexError);
    const std::vector<double> params{0.1};
    EXPECT_THROW(apply_gate_inplace(s, {.kind = GateKind::RY, .target = 0, .param_slot = 1}, params), IndexError);
}

TEST(ApplyGate, AdjointUndoes) {
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + rng.index(4);
        const auto start = oracle::random_state(n, rng);
        const GateOp op = random_gate(n, rng);
        StateVector s = from_oracle(n, start);
        apply_gate_inplace(s, op, {});
        apply_gate_adjoint_inplace(s, op, {});
        EXPECT_LE(state_diff(s, start), 1e-14);
    }
}

TEST(Oracle, FullUnitaryExamples) {
    const std::vector<GateOp> h{{.kind = GateKind::H, .target = 0}};
    EXPECT_LE(full_unitary_oracle(h, 1, {}).max_abs_diff(gate_matrix(GateKind::H)), 1e-15);
    const std::vector<GateOp> xx{{.kind = GateKind::X, .target = 0}, {.kind = GateKind::X, .target = 0}};
    EXPECT_LE(full_unitary_oracle(xx, 1, {}).max_abs_diff(CMatrix::identity(2)), 1e-15);
    EXPECT_THROW((void)full_unitary_oracle(h, kMaxOracleQubits + 1, {}), SizeError);
}

// Statevector application vs the library oracle vs the test-side dense oracle.
TEST(Oracle, RandomProgramEquivalence) {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng.index(3);
        const std::size_t len = 1 + rng.index(12);
        std::vector<GateOp> ops;
        for (std::size_t g = 0; g < len; ++g) {
            ops.push_back(random_gate(n, rng));
        }
        const auto start = oracle::random_state(n, rng);
        StateVector s = from_oracle(n, start);
        for (const GateOp &op : ops) {
            apply_gate_inplace(s, op, {});
        }
        const auto reference = oracle::simulate(ops, n, {}, start);
        EXPECT_LE(state_diff(s, reference), 1e-10);

        const CMatrix u = full_unitary_oracle(ops, n, {});
        EXPECT_LE(state_diff(s, u * std::span<const Complex>(start)), 1e-10);
    }
}

TEST(Properties, NormPreservation) {
    Rng rng(5);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + rng.index(6);
        StateVector s = from_oracle(n, oracle::random_state(n, rng));
        apply_gate_inplace(s, random_gate(n, rng), {});
        EXPECT_NEAR(s.norm(), 1.0, 1e-10);
    }
}

TEST(Properties, LocalityOfSingleQubitGates) {
    Rng rng(6);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + rng.index(4);
        StateVector s = from_oracle(n, oracle::random_state(n, rng));
        const std::vector<double> before = oracle::expect_z(s.amplitudes(), n);
        GateOp op = random_gate(n, rng);
        op.control.reset();
        if (is_two_qubit(op.kind)) {
            op.kind = GateKind::H;
        }
        apply_gate_inplace(s, op, {});
        const std::vector<double> after = oracle::expect_z(s.amplitudes(), n);
        for (std::size_t q = 0; q < n; ++q) {
            if (q != op.target) {
                EXPECT_NEAR(after[q], before[q], 1e-12);
            }
        }
    }
}

// The OpenMP kernels must reproduce the serial reference exactly for the
// gate kernels and to rounding for reductions.
TEST(Kernels, OmpMatchesSerial) {
    constexpr std::size_t n = 15;
    Rng rng(8);
    const auto start = oracle::random_state(n, rng);
    const auto other = oracle::random_state(n, rng);
    const double c = std::cos(0.35);
    const double s = std::sin(0.35);
    const kernels::Mat2 m{Complex{c}, Complex{-s}, Complex{s}, Complex{c}};

    for (std::size_t t : {std::size_t{0}, std::size_t{7}, n - 1}) {
        std::vector<Complex> a = start;
        std::vector<Complex> b = start;
        kernels::serial::apply_1q(a, t, m);
        kernels::omp::apply_1q(b, t, m);
        EXPECT_EQ(a, b);
        kernels::serial::apply_cz(a, t, (t + 3) % n);
        kernels::omp::apply_cz(b, t, (t + 3) % n);
        EXPECT_EQ(a, b);
        kernels::serial::apply_cnot(a, (t + 5) % n, t);
        kernels::omp::apply_cnot(b, (t + 5) % n, t);
        EXPECT_EQ(a, b);
        EXPECT_NEAR(kernels::serial::ry_generator_overlap(other, a, t), kernels::omp::ry_generator_overlap(other, b, t),
                    1e-13);
    }
    std::vector<double> zs(n);
    std::vector<double> zo(n);
    kernels::serial::expect_z_all(start, n, zs);
    kernels::omp::expect_z_all(start, n, zo);
    for (std::size_t q = 0; q < n; ++q) {
        EXPECT_NEAR(zs[q], zo[q], 1e-13);
    }
    std::vector<double> w(n);
    for (double &x : w) {
        x = rng.normal();
    }
    std::vector<Complex> os(start.size());
    std::vector<Complex> oo(start.size());
    kernels::serial::apply_z_sum(start, os, w);
    kernels::omp::apply_z_sum(start, oo, w);
    EXPECT_EQ(os, oo);
}

TEST(Kernels, OmpReductionsAreReproducible) {
    constexpr std::size_t n = 16;
    Rng rng(9);
    const auto a = oracle::random_state(n, rng);
    std::vector<double> z1(n);
    std::vector<double> z2(n);
    kernels::omp::expect_z_all(a, n, z1);
    kernels::omp::expect_z_all(a, n, z2);
    EXPECT_EQ(z1, z2);
}

TEST(Kernels, LargeRegisterAgreesWithOracleExpectations) {
    constexpr std::size_t n = 14;
    Rng rng(10);
    const auto start = oracle::random_state(n, rng);
    StateVector s = from_oracle(n, start);
    apply_gate_inplace(s, {.kind = GateKind::RY, .target = 13, .fixed_angle = 0.9}, {});
    apply_gate_inplace(s, {.kind = GateKind::CZ, .target = 2, .control = 13}, {});
    const std::vector<double> z = expect_z_all(s);
    const std::vector<double> ref = oracle::expect_z(s.amplitudes(), n);
    for (std::size_t q = 0; q < n; ++q) {
        EXPECT_NEAR(z[q], ref[q], 1e-12);
    }
}

} // namespace
