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
#include "qhybrid/kernels.hpp"

#include <algorithm>
#include <utility>
#include <vector>

#include <omp.h>

namespace qhybrid::kernels {

namespace {

std::size_t log2_size(std::size_t size) {
    std::size_t n = 0;
    while ((std::size_t{1} << n) < size) {
        ++n;
    }
    return n;
}

bool use_parallel(std::size_t size) {
    return log2_size(size) >= kParallelMinQubits && omp_in_parallel() == 0;
}

/// Index with zero bits inserted at positions lo < hi.
constexpr std::size_t insert_two_zero_bits(std::size_t i, std::size_t lo, std::size_t hi) noexcept {
    return insert_zero_bit(insert_zero_bit(i, lo), hi);
}

double z_weight(std::size_t index, std::span<const double> weights) {
    double w = 0.0;
    for (std::size_t q = 0; q < weights.size(); ++q) {
        w += ((index >> q) & 1U) != 0 ? -weights[q] : weights[q];
    }
    return w;
}

} // namespace

// ---------------------------------------------------------------------------
// serial reference
// ---------------------------------------------------------------------------

namespace serial {

void apply_1q(std::span<Complex> amps, std::size_t target, const Mat2 &m) {
    const std::size_t stride = std::size_t{1} << target;
    const std::size_t half = amps.size() / 2;
    for (std::size_t k = 0; k < half; ++k) {
        const std::size_t i0 = insert_zero_bit(k, target);
        const std::size_t i1 = i0 | stride;
        const Complex a0 = amps[i0];
        const Complex a1 = amps[i1];
        amps[i0] = m[0] * a0 + m[1] * a1;
        amps[i1] = m[2] * a0 + m[3] * a1;
    }
}

void apply_cz(std::span<Complex> amps, std::size_t q0, std::size_t q1) {
    const std::size_t mask = (std::size_t{1} << q0) | (std::size_t{1} << q1);
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if ((i & mask) == mask) {
            amps[i] = -amps[i];
        }
    }
}

void apply_cnot(std::span<Complex> amps, std::size_t control, std::size_t target) {
    const std::size_t cbit = std::size_t{1} << control;
    const std::size_t tbit = std::size_t{1} << target;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if ((i & cbit) != 0 && (i & tbit) == 0) {
            std::swap(amps[i], amps[i | tbit]);
        }
    }
}

void expect_z_all(std::span<const Complex> amps, std::size_t n_qubits, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const double p = std::norm(amps[i]);
        for (std::size_t q = 0; q < n_qubits; ++q) {
            out[q] += ((i >> q) & 1U) != 0 ? -p : p;
        }
    }
}

void apply_z_sum(std::span<const Complex> in, std::span<Complex> out, std::span<const double> weights) {
    for (std::size_t i = 0; i < in.size(); ++i) {
        out[i] = z_weight(i, weights) * in[i];
    }
}

double ry_generator_overlap(std::span<const Complex> bra, std::span<const Complex> ket, std::size_t target) {
    const std::size_t stride = std::size_t{1} << target;
    const std::size_t half = ket.size() / 2;
    double acc = 0.0;
    for (std::size_t k = 0; k < half; ++k) {
        const std::size_t i0 = insert_zero_bit(k, target);
        const std::size_t i1 = i0 | stride;
        // G|ket> on the pair: (-ket1, ket0)
        acc += std::real(std::conj(bra[i0]) * (-ket[i1]) + std::conj(bra[i1]) * ket[i0]);
    }
    return acc;
}

} // namespace serial

// ---------------------------------------------------------------------------
// OpenMP
// ---------------------------------------------------------------------------

namespace omp {

void apply_1q(std::span<Complex> amps, std::size_t target, const Mat2 &m) {
    const std::size_t stride = std::size_t{1} << target;
    const auto half = static_cast<std::ptrdiff_t>(amps.size() / 2);
    Complex *data = amps.data();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < half; ++k) {
        const std::size_t i0 = insert_zero_bit(static_cast<std::size_t>(k), target);
        const std::size_t i1 = i0 | stride;
        const Complex a0 = data[i0];
        const Complex a1 = data[i1];
        data[i0] = m[0] * a0 + m[1] * a1;
        data[i1] = m[2] * a0 + m[3] * a1;
    }
}

void apply_cz(std::span<Complex> amps, std::size_t q0, std::size_t q1) {
    const std::size_t lo = std::min(q0, q1);
    const std::size_t hi = std::max(q0, q1);
    const std::size_t mask = (std::size_t{1} << q0) | (std::size_t{1} << q1);
    const auto quarter = static_cast<std::ptrdiff_t>(amps.size() / 4);
    Complex *data = amps.data();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < quarter; ++k) {
        const std::size_t i = insert_two_zero_bits(static_cast<std::size_t>(k), lo, hi) | mask;
        data[i] = -data[i];
    }
}

void apply_cnot(std::span<Complex> amps, std::size_t control, std::size_t target) {
    const std::size_t lo = std::min(control, target);
    const std::size_t hi = std::max(control, target);
    const std::size_t cbit = std::size_t{1} << control;
    const std::size_t tbit = std::size_t{1} << target;
    const auto quarter = static_cast<std::ptrdiff_t>(amps.size() / 4);
    Complex *data = amps.data();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < quarter; ++k) {
        const std::size_t i = insert_two_zero_bits(static_cast<std::size_t>(k), lo, hi) | cbit;
        std::swap(data[i], data[i | tbit]);
    }
}

void expect_z_all(std::span<const Complex> amps, std::size_t n_qubits, std::span<double> out) {
    const std::size_t chunks = std::min(kReductionChunks, amps.size());
    const std::size_t chunk_len = amps.size() / chunks;
    // partial[c * (n + 1) + q]: sum of p over indices with bit q set; slot n holds total p
    std::vector<double> partial(chunks * (n_qubits + 1), 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
        double *acc = partial.data() + static_cast<std::size_t>(c) * (n_qubits + 1);
        const std::size_t begin = static_cast<std::size_t>(c) * chunk_len;
        for (std::size_t i = begin; i < begin + chunk_len; ++i) {
            const double p = std::norm(amps[i]);
            acc[n_qubits] += p;
            for (std::size_t q = 0; q < n_qubits; ++q) {
                if (((i >> q) & 1U) != 0) {
                    acc[q] += p;
                }
            }
        }
    }
    std::vector<double> ones(n_qubits, 0.0);
    double total = 0.0;
    for (std::size_t c = 0; c < chunks; ++c) {
        const double *acc = partial.data() + c * (n_qubits + 1);
        for (std::size_t q = 0; q < n_qubits; ++q) {
            ones[q] += acc[q];
        }
        total += acc[n_qubits];
    }
    for (std::size_t q = 0; q < n_qubits; ++q) {
        out[q] = total - 2.0 * ones[q];
    }
}

void apply_z_sum(std::span<const Complex> in, std::span<Complex> out, std::span<const double> weights) {
    const auto size = static_cast<std::ptrdiff_t>(in.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < size; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        out[idx] = z_weight(idx, weights) * in[idx];
    }
}

double ry_generator_overlap(std::span<const Complex> bra, std::span<const Complex> ket, std::size_t target) {
    const std::size_t stride = std::size_t{1} << target;
    const std::size_t half = ket.size() / 2;
    const std::size_t chunks = std::min(kReductionChunks, half);
    const std::size_t chunk_len = half / chunks;
    std::vector<double> partial(chunks, 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
        double acc = 0.0;
        const std::size_t begin = static_cast<std::size_t>(c) * chunk_len;
        for (std::size_t k = begin; k < begin + chunk_len; ++k) {
            const std::size_t i0 = insert_zero_bit(k, target);
            const std::size_t i1 = i0 | stride;
            acc += std::real(std::conj(bra[i0]) * (-ket[i1]) + std::conj(bra[i1]) * ket[i0]);
        }
        partial[static_cast<std::size_t>(c)] = acc;
    }
    double total = 0.0;
    for (const double p : partial) {
        total += p;
    }
    return total;
}

} // namespace omp

// ---------------------------------------------------------------------------
// dispatch
// ---------------------------------------------------------------------------

void apply_1q(std::span<Complex> amps, std::size_t target, const Mat2 &m) {
    use_parallel(amps.size()) ? omp::apply_1q(amps, target, m) : serial::apply_1q(amps, target, m);
}

void apply_cz(std::span<Complex> amps, std::size_t q0, std::size_t q1) {
    use_parallel(amps.size()) ? omp::apply_cz(amps, q0, q1) : serial::apply_cz(amps, q0, q1);
}

void apply_cnot(std::span<Complex> amps, std::size_t control, std::size_t target) {
    use_parallel(amps.size()) ? omp::apply_cnot(amps, control, target)
                              : serial::apply_cnot(amps, control, target);
}

void expect_z_all(std::span<const Complex> amps, std::size_t n_qubits, std::span<double> out) {
    use_parallel(amps.size()) ? omp::expect_z_all(amps, n_qubits, out)
                              : serial::expect_z_all(amps, n_qubits, out);
}

void apply_z_sum(std::span<const Complex> in, std::span<Complex> out, std::span<const double> weights) {
    use_parallel(in.size()) ? omp::apply_z_sum(in, out, weights) : serial::apply_z_sum(in, out, weights);
}

double ry_generator_overlap(std::span<const Complex> bra, std::span<const Complex> ket, std::size_t target) {
    return use_parallel(ket.size()) ? omp::ry_generator_overlap(bra, ket, target)
                                    : serial::ry_generator_overlap(bra, ket, target);
}

} // namespace qhybrid::kernels
