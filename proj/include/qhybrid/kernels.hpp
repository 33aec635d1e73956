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

#include <array>
#include <complex>
#include <cstddef>
#include <span>

/// Statevector kernels over 2^n amplitudes. Qubit q addresses bit q of the
/// amplitude index (qubit 0 is the least-significant bit).
///
/// Every kernel has a `serial` reference implementation and an `omp`
/// variant. The free functions in `kernels` dispatch to `omp` once the
/// register is large enough and we are not already inside a parallel
/// region (batch-level loops in the model parallelize over samples).
///
/// Reductions in the `omp` variants split the index range into a fixed
/// number of chunks independent of the thread count and combine the
/// partial sums in chunk order, so results are reproducible bit-for-bit
/// across runs and thread counts.
namespace qhybrid::kernels {

using Complex = std::complex<double>;

/// Row-major 2x2 matrix {m00, m01, m10, m11}.
using Mat2 = std::array<Complex, 4>;

/// Registers with at least this many qubits use the OpenMP kernels.
inline constexpr std::size_t kParallelMinQubits = 14;

/// Number of reduction chunks used by the OpenMP reductions.
inline constexpr std::size_t kReductionChunks = 64;

[[nodiscard]] constexpr std::size_t insert_zero_bit(std::size_t i, std::size_t q) noexcept {
    const std::size_t low_mask = (std::size_t{1} << q) - 1;
    return ((i >> q) << (q + 1)) | (i & low_mask);
}

namespace serial {
void apply_1q(std::span<Complex> amps, std::size_t target, const Mat2 &m);
void apply_cz(std::span<Complex> amps, std::size_t q0, std::size_t q1);
void apply_cnot(std::span<Complex> amps, std::size_t control, std::size_t target);
void expect_z_all(std::span<const Complex> amps, std::size_t n_qubits, std::span<double> out);
/// out[i] = (sum_q weights[q] * z_q(i)) * in[i], z_q(i) = +1 if bit q of i is 0 else -1.
void apply_z_sum(std::span<const Complex> in, std::span<Complex> out, std::span<const double> weights);
/// Re <bra| G_t |ket> with G = [[0, -1], [1, 0]] = -iY on the target qubit.
double ry_generator_overlap(std::span<const Complex> bra, std::span<const Complex> ket, std::size_t target);
} // namespace serial

namespace omp {
void apply_1q(std::span<Complex> amps, std::size_t target, const Mat2 &m);
void apply_cz(std::span<Complex> amps, std::size_t q0, std::size_t q1);
void apply_cnot(std::span<Complex> amps, std::size_t control, std::size_t target);
void expect_z_all(std::span<const Complex> amps, std::size_t n_qubits, std::span<double> out);
void apply_z_sum(std::span<const Complex> in, std::span<Complex> out, std::span<const double> weights);
double ry_generator_overlap(std::span<const Complex> bra, std::span<const Complex> ket, std::size_t target);
} // namespace omp

void apply_1q(std::span<Complex> amps, std::size_t target, const Mat2 &m);
void apply_cz(std::span<Complex> amps, std::size_t q0, std::size_t q1);
void apply_cnot(std::span<Complex> amps, std::size_t control, std::size_t target);
void expect_z_all(std::span<const Complex> amps, std::size_t n_qubits, std::span<double> out);
void apply_z_sum(std::span<const Complex> in, std::span<Complex> out, std::span<const double> weights);
double ry_generator_overlap(std::span<const Complex> bra, std::span<const Complex> ket, std::size_t target);

} // namespace qhybrid::kernels
