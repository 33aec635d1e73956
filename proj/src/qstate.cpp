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
#include "qhybrid/qstate.hpp"

#include <cmath>
#include <map>
#include <string>

#include "qhybrid/errors.hpp"
#include "qhybrid/kernels.hpp"

namespace qhybrid {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

kernels::Mat2 single_qubit_mat(GateKind kind, double angle) {
    switch (kind) {
    case GateKind::I:
        return {1.0, 0.0, 0.0, 1.0};
    case GateKind::X:
        return {0.0, 1.0, 1.0, 0.0};
    case GateKind::Y:
        return {0.0, Complex{0.0, -1.0}, Complex{0.0, 1.0}, 0.0};
    case GateKind::Z:
        return {1.0, 0.0, 0.0, -1.0};
    case GateKind::H:
        return {kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2};
    case GateKind::RY: {
        const double c = std::cos(angle / 2.0);
        const double s = std::sin(angle / 2.0);
        return {c, -s, s, c};
    }
    default:
        throw ConfigError("gate is not a single-qubit gate: " + std::string(gate_name(kind)));
    }
}

CMatrix from_mat2(const kernels::Mat2 &m) { return CMatrix(2, {m[0], m[1], m[2], m[3]}); }

/// Kronecker product over all qubits, qubit n-1 leftmost, with `factors`
/// supplying the 2x2 acting on a qubit (identity elsewhere).
CMatrix lift(const std::map<std::size_t, CMatrix> &factors, std::size_t n_qubits) {
    CMatrix out = CMatrix::identity(1);
    for (std::size_t q = n_qubits; q-- > 0;) {
        const auto it = factors.find(q);
        out = kron(out, it != factors.end() ? it->second : CMatrix::identity(2));
    }
    return out;
}

CMatrix lift_gate(const GateOp &op, std::size_t n_qubits, std::span<const double> params) {
    if (!is_two_qubit(op.kind)) {
        return lift({{op.target, gate_matrix(op.kind, op.angle(params))}}, n_qubits);
    }
    // |0><0|_c (x) I + |1><1|_c (x) G_t
    const CMatrix p0(2, {1.0, 0.0, 0.0, 0.0});
    const CMatrix p1(2, {0.0, 0.0, 0.0, 1.0});
    const CMatrix g = gate_matrix(op.kind == GateKind::CZ ? GateKind::Z : GateKind::X);
    CMatrix a = lift({{*op.control, p0}}, n_qubits);
    const CMatrix b = lift({{*op.control, p1}, {op.target, g}}, n_qubits);
    CMatrix sum(a.dim());
    for (std::size_t r = 0; r < a.dim(); ++r) {
        for (std::size_t c = 0; c < a.dim(); ++c) {
            sum(r, c) = a(r, c) + b(r, c);
        }
    }
    return sum;
}

void check_qubits(std::size_t n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw SizeError("qubit count " + std::to_string(n_qubits) + " outside [1, " +
                        std::to_string(kMaxQubits) + "]");
    }
}

} // namespace

std::string_view gate_name(GateKind kind) noexcept {
    switch (kind) {
    case GateKind::I:
        return "I";
    case GateKind::X:
        return "X";
    case GateKind::Y:
        return "Y";
    case GateKind::Z:
        return "Z";
    case GateKind::H:
        return "H";
    case GateKind::RY:
        return "RY";
    case GateKind::CZ:
        return "CZ";
    case GateKind::CNOT:
        return "CNOT";
    }
    return "?";
}

bool is_two_qubit(GateKind kind) noexcept { return kind == GateKind::CZ || kind == GateKind::CNOT; }

// ---------------------------------------------------------------------------
// CMatrix

CMatrix::CMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}

CMatrix::CMatrix(std::size_t dim, std::vector<Complex> data) : dim_(dim), data_(std::move(data)) {
    if (data_.size() != dim_ * dim_) {
        throw SizeError("matrix data length does not match dimension");
    }
}

CMatrix CMatrix::identity(std::size_t dim) {
    CMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

CMatrix CMatrix::adjoint() const {
    CMatrix out(dim_);
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t c = 0; c < dim_; ++c) {
            out(c, r) = std::conj((*this)(r, c));
        }
    }
    return out;
}

CMatrix CMatrix::operator*(const CMatrix &rhs) const {
    if (rhs.dim_ != dim_) {
        throw SizeError("matrix dimension mismatch");
    }
    CMatrix out(dim_);
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t k = 0; k < dim_; ++k) {
            const Complex a = (*this)(r, k);
            if (a == Complex{}) {
                continue;
            }
            for (std::size_t c = 0; c < dim_; ++c) {
                out(r, c) += a * rhs(k, c);
            }
        }
    }
    return out;
}

std::vector<Complex> CMatrix::operator*(std::span<const Complex> v) const {
    if (v.size() != dim_) {
        throw SizeError("matrix-vector dimension mismatch");
    }
    std::vector<Complex> out(dim_);
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t c = 0; c < dim_; ++c) {
            out[r] += (*this)(r, c) * v[c];
        }
    }
    return out;
}

double CMatrix::max_abs_diff(const CMatrix &other) const {
    if (other.dim_ != dim_) {
        throw SizeError("matrix dimension mismatch");
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < data_.size(); ++i) {
        worst = std::max(worst, std::abs(data_[i] - other.data_[i]));
    }
    return worst;
}

CMatrix kron(const CMatrix &a, const CMatrix &b) {
    const std::size_t da = a.dim();
    const std::size_t db = b.dim();
    CMatrix out(da * db);
    for (std::size_t ar = 0; ar < da; ++ar) {
        for (std::size_t ac = 0; ac < da; ++ac) {
            const Complex s = a(ar, ac);
            for (std::size_t br = 0; br < db; ++br) {
                for (std::size_t bc = 0; bc < db; ++bc) {
                    out(ar * db + br, ac * db + bc) = s * b(br, bc);
                }
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(std::size_t n_qubits) : n_qubits_(n_qubits) {
    check_qubits(n_qubits);
    amps_.assign(std::size_t{1} << n_qubits, Complex{});
    amps_[0] = 1.0;
}

StateVector::StateVector(std::size_t n_qubits, std::vector<Complex> amplitudes)
    : n_qubits_(n_qubits), amps_(std::move(amplitudes)) {
    check_qubits(n_qubits);
    if (amps_.size() != (std::size_t{1} << n_qubits)) {
        throw SizeError("amplitude count " + std::to_string(amps_.size()) + " is not 2^" +
                        std::to_string(n_qubits));
    }
    for (const Complex &a : amps_) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
            throw SizeError("non-finite amplitude");
        }
    }
}

double StateVector::norm() const {
    double acc = 0.0;
    for (const Complex &a : amps_) {
        acc += std::norm(a);
    }
    return std::sqrt(acc);
}

StateVector zero_state(std::size_t n_qubits) { return StateVector(n_qubits); }

CMatrix gate_matrix(GateKind kind, double angle) {
    switch (kind) {
    case GateKind::CZ:
        return CMatrix(4, {1.0, 0.0, 0.0, 0.0, //
                           0.0, 1.0, 0.0, 0.0, //
                           0.0, 0.0, 1.0, 0.0, //
                           0.0, 0.0, 0.0, -1.0});
    case GateKind::CNOT:
        return CMatrix(4, {1.0, 0.0, 0.0, 0.0, //
                           0.0, 1.0, 0.0, 0.0, //
                           0.0, 0.0, 0.0, 1.0, //
                           0.0, 0.0, 1.0, 0.0});
    default:
        return from_mat2(single_qubit_mat(kind, angle));
    }
}

void validate_op(const GateOp &op, std::size_t n_qubits, std::span<const double> params) {
    if (op.target >= n_qubits) {
        throw IndexError("target qubit " + std::to_string(op.target) + " out of range for " +
                         std::to_string(n_qubits) + " qubits");
    }
    if (is_two_qubit(op.kind)) {
        if (!op.control) {
            throw IndexError(std::string(gate_name(op.kind)) + " requires a control qubit");
        }
        if (*op.control >= n_qubits) {
            throw IndexError("control qubit " + std::to_string(*op.control) + " out of range");
        }
        if (*op.control == op.target) {
            throw IndexError("control and target must differ");
        }
    } else if (op.control) {
        throw IndexError(std::string(gate_name(op.kind)) + " takes no control qubit");
    }
    if (op.param_slot) {
        if (op.kind != GateKind::RY) {
            throw IndexError("only RY gates take a parameter slot");
        }
        if (*op.param_slot >= params.size()) {
            throw IndexError("parameter slot " + std::to_string(*op.param_slot) + " out of range for " +
                             std::to_string(params.size()) + " parameters");
        }
    }
}

void apply_gate_inplace(StateVector &state, const GateOp &op, std::span<const double> params) {
    validate_op(op, state.num_qubits(), params);
    auto amps = state.amplitudes();
    switch (op.kind) {
    case GateKind::I:
        return;
    case GateKind::CZ:
        kernels::apply_cz(amps, *op.control, op.target);
        return;
    case GateKind::CNOT:
        kernels::apply_cnot(amps, *op.control, op.target);
        return;
    default:
        kernels::apply_1q(amps, op.target, single_qubit_mat(op.kind, op.angle(params)));
    }
}

void apply_gate_adjoint_inplace(StateVector &state, const GateOp &op, std::span<const double> params) {
    validate_op(op, state.num_qubits(), params);
    if (op.kind == GateKind::RY) {
        kernels::apply_1q(state.amplitudes(), op.target, single_qubit_mat(GateKind::RY, -op.angle(params)));
        return;
    }
    // every other gate in the set is Hermitian
    apply_gate_inplace(state, op, params);
}

StateVector apply_gate(StateVector state, const GateOp &op, std::span<const double> params) {
    apply_gate_inplace(state, op, params);
    return state;
}

CMatrix full_unitary_oracle(std::span<const GateOp> ops, std::size_t n_qubits, std::span<const double> params) {
    if (n_qubits < 1 || n_qubits > kMaxOracleQubits) {
        throw SizeError("oracle supports 1.." + std::to_string(kMaxOracleQubits) + " qubits, got " +
                        std::to_string(n_qubits));
    }
    CMatrix u = CMatrix::identity(std::size_t{1} << n_qubits);
    for (const GateOp &op : ops) {
        validate_op(op, n_qubits, params);
        u = lift_gate(op, n_qubits, params) * u;
    }
    return u;
}

} // namespace qhybrid
