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

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace qhybrid {

using Complex = std::complex<double>;

/// Largest register the simulator accepts (2^24 complex doubles = 256 MiB).
inline constexpr std::size_t kMaxQubits = 24;

/// Largest register the dense full-unitary oracle accepts.
inline constexpr std::size_t kMaxOracleQubits = 10;

enum class GateKind { I, X, Y, Z, H, RY, CZ, CNOT };

[[nodiscard]] std::string_view gate_name(GateKind kind) noexcept;
[[nodiscard]] bool is_two_qubit(GateKind kind) noexcept;

/// Dense square complex matrix, row-major.
class CMatrix {
  public:
    CMatrix() = default;
    explicit CMatrix(std::size_t dim);
    CMatrix(std::size_t dim, std::vector<Complex> data);

    static CMatrix identity(std::size_t dim);

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] Complex &operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
    [[nodiscard]] const Complex &operator()(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }
    [[nodiscard]] std::span<const Complex> data() const noexcept { return data_; }

    [[nodiscard]] CMatrix adjoint() const;
    [[nodiscard]] CMatrix operator*(const CMatrix &rhs) const;
    [[nodiscard]] std::vector<Complex> operator*(std::span<const Complex> v) const;

    /// Largest elementwise |a - b|.
    [[nodiscard]] double max_abs_diff(const CMatrix &other) const;

  private:
    std::size_t dim_ = 0;
    std::vector<Complex> data_;
};

/// Kronecker product a (x) b.
[[nodiscard]] CMatrix kron(const CMatrix &a, const CMatrix &b);

/// One gate in a circuit program.
///
/// `control` is set only for CZ and CNOT (CZ is symmetric; the pair is just
/// {control, target}). A trainable RY reads its angle from
/// `params[*param_slot]`; a fixed RY uses `fixed_angle`.
struct GateOp {
    GateKind kind = GateKind::I;
    std::size_t target = 0;
    std::optional<std::size_t> control = std::nullopt;
    std::optional<std::size_t> param_slot = std::nullopt;
    double fixed_angle = 0.0;

    [[nodiscard]] double angle(std::span<const double> params) const {
        return param_slot ? params[*param_slot] : fixed_angle;
    }
};

/// Pure state of n qubits stored as 2^n complex amplitudes. Qubit 0 is the
/// least-significant bit of the amplitude index.
class StateVector {
  public:
    /// |0...0> on n qubits.
    explicit StateVector(std::size_t n_qubits);
    /// Takes ownership of `amplitudes`; length must be 2^n_qubits and every
    /// entry finite. Normalization is the caller's responsibility.
    StateVector(std::size_t n_qubits, std::vector<Complex> amplitudes);

    [[nodiscard]] std::size_t num_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] std::size_t size() const noexcept { return amps_.size(); }
    [[nodiscard]] std::span<Complex> amplitudes() noexcept { return amps_; }
    [[nodiscard]] std::span<const Complex> amplitudes() const noexcept { return amps_; }
    [[nodiscard]] const Complex &operator[](std::size_t i) const { return amps_[i]; }

    [[nodiscard]] double norm() const;

  private:
    std::size_t n_qubits_;
    std::vector<Complex> amps_;
};

[[nodiscard]] StateVector zero_state(std::size_t n_qubits);

/// 2x2 matrix for single-qubit kinds, 4x4 for CZ/CNOT. For the 4x4 case the
/// basis index is 2*control_bit + target_bit.
/// RY(theta) = [[cos(theta/2), -sin(theta/2)], [sin(theta/2), cos(theta/2)]].
[[nodiscard]] CMatrix gate_matrix(GateKind kind, double angle = 0.0);

/// Throws IndexError if any qubit index or parameter slot is out of range.
void validate_op(const GateOp &op, std::size_t n_qubits, std::span<const double> params);

void apply_gate_inplace(StateVector &state, const GateOp &op, std::span<const double> params);
/// Applies U^dagger for the gate.
void apply_gate_adjoint_inplace(StateVector &state, const GateOp &op, std::span<const double> params);

[[nodiscard]] StateVector apply_gate(StateVector state, const GateOp &op, std::span<const double> params);

/// Dense 2^n x 2^n unitary of the whole program, built by Kronecker-lifting
/// each gate and multiplying in application order. Test oracle only.
[[nodiscard]] CMatrix full_unitary_oracle(std::span<const GateOp> ops, std::size_t n_qubits,
                                          std::span<const double> params);

} // namespace qhybrid
