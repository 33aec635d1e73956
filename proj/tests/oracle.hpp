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

// Brute-force reference implementations used only by the tests. Nothing
// here calls into the library's gate or layer code.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "qhybrid/qstate.hpp"
#include "qhybrid/random.hpp"

namespace oracle {

using Complex = std::complex<double>;

struct Dense {
    std::size_t dim = 0;
    std::vector<Complex> a;

    explicit Dense(std::size_t d = 0) : dim(d), a(d * d) {}
    Complex &operator()(std::size_t r, std::size_t c) { return a[r * dim + c]; }
    Complex operator()(std::size_t r, std::size_t c) const { return a[r * dim + c]; }

    static Dense eye(std::size_t d) {
        Dense m(d);
        for (std::size_t i = 0; i < d; ++i) {
            m(i, i) = 1.0;
        }
        return m;
    }
};

inline Dense matmul(const Dense &x, const Dense &y) {
    Dense out(x.dim);
    for (std::size_t i = 0; i < x.dim; ++i) {
        for (std::size_t k = 0; k < x.dim; ++k) {
            const Complex xik = x(i, k);
            if (xik == Complex{}) {
                continue;
            }
            for (std::size_t j = 0; j < x.dim; ++j) {
                out(i, j) += xik * y(k, j);
            }
        }
    }
    return out;
}

inline Dense add(const Dense &x, const Dense &y) {
    Dense out(x.dim);
    for (std::size_t i = 0; i < out.a.size(); ++i) {
        out.a[i] = x.a[i] + y.a[i];
    }
    return out;
}

inline Dense kron(const Dense &x, const Dense &y) {
    Dense out(x.dim * y.dim);
    for (std::size_t i = 0; i < x.dim; ++i) {
        for (std::size_t j = 0; j < x.dim; ++j) {
            for (std::size_t k = 0; k < y.dim; ++k) {
                for (std::size_t l = 0; l < y.dim; ++l) {
                    out(i * y.dim + k, j * y.dim + l) = x(i, j) * y(k, l);
                }
            }
        }
    }
    return out;
}

inline Dense two_by_two(Complex m00, Complex m01, Complex m10, Complex m11) {
    Dense m(2);
    m(0, 0) = m00;
    m(0, 1) = m01;
    m(1, 0) = m10;
    m(1, 1) = m11;
    return m;
}

inline Dense pauli_x() { return two_by_two(0.0, 1.0, 1.0, 0.0); }
inline Dense pauli_y() { return two_by_two(0.0, Complex(0, -1), Complex(0, 1), 0.0); }
inline Dense pauli_z() { return two_by_two(1.0, 0.0, 0.0, -1.0); }
inline Dense hadamard() {
    const double h = 1.0 / std::sqrt(2.0);
    return two_by_two(h, h, h, -h);
}
// exp(-i theta Y / 2)
inline Dense ry(double theta) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    return two_by_two(c, -s, s, c);
}

// Places `g` on qubit q of an n-qubit register. The leftmost Kronecker
// factor is the most significant bit, so qubit n-1 comes first.
inline Dense lift(const Dense &g, std::size_t q, std::size_t n) {
    Dense out = Dense::eye(1);
    for (std::size_t k = n; k-- > 0;) {
        out = kron(out, k == q ? g : Dense::eye(2));
    }
    return out;
}

// |0><0|_c (x) I + |1><1|_c (x) G_t
inline Dense controlled(const Dense &g, std::size_t control, std::size_t target, std::size_t n) {
    const Dense p0 = two_by_two(1.0, 0.0, 0.0, 0.0);
    const Dense p1 = two_by_two(0.0, 0.0, 0.0, 1.0);
    return add(lift(p0, control, n), matmul(lift(p1, control, n), lift(g, target, n)));
}

inline Dense gate_unitary(const qhybrid::GateOp &op, std::size_t n, std::span<const double> params) {
    using qhybrid::GateKind;
    switch (op.kind) {
    case GateKind::I:
        return Dense::eye(std::size_t{1} << n);
    case GateKind::X:
        return lift(pauli_x(), op.target, n);
    case GateKind::Y:
        return lift(pauli_y(), op.target, n);
    case GateKind::Z:
        return lift(pauli_z(), op.target, n);
    case GateKind::H:
        return lift(hadamard(), op.target, n);
    case GateKind::RY:
        return lift(ry(op.param_slot ? params[*op.param_slot] : op.fixed_angle), op.target, n);
    case GateKind::CZ:
        return controlled(pauli_z(), *op.control, op.target, n);
    case GateKind::CNOT:
        return controlled(pauli_x(), *op.control, op.target, n);
    }
    return Dense::eye(std::size_t{1} << n);
}

inline std::vector<Complex> matvec(const Dense &u, std::span<const Complex> v) {
    std::vector<Complex> out(u.dim);
    for (std::size_t i = 0; i < u.dim; ++i) {
        for (std::size_t j = 0; j < u.dim; ++j) {
            out[i] += u(i, j) * v[j];
        }
    }
    return out;
}

inline std::vector<Complex> simulate(std::span<const qhybrid::GateOp> ops, std::size_t n,
                                     std::span<const double> params, std::vector<Complex> state) {
    for (const qhybrid::GateOp &op : ops) {
        state = matvec(gate_unitary(op, n, params), state);
    }
    return state;
}

// <Z_q> as the diagonal sum of |a_i|^2 * (+1 / -1).
inline std::vector<double> expect_z(std::span<const Complex> amps, std::size_t n) {
    std::vector<double> z(n, 0.0);
    for (std::size_t i = 0; i < amps.size(); ++i) {
        for (std::size_t q = 0; q < n; ++q) {
            z[q] += std::norm(amps[i]) * (((i >> q) & 1U) != 0 ? -1.0 : 1.0);
        }
    }
    return z;
}

inline double max_abs_diff(std::span<const Complex> x, std::span<const Complex> y) {
    double m = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        m = std::max(m, std::abs(x[i] - y[i]));
    }
    return m;
}

inline double norm2(std::span<const Complex> v) {
    double s = 0.0;
    for (const Complex &c : v) {
        s += std::norm(c);
    }
    return std::sqrt(s);
}

inline std::vector<Complex> random_state(std::size_t n, qhybrid::Rng &rng, bool real = false) {
    std::vector<Complex> v(std::size_t{1} << n);
    for (Complex &c : v) {
        c = {rng.normal(), real ? 0.0 : rng.normal()};
    }
    const double nrm = norm2(v);
    for (Complex &c : v) {
        c /= nrm;
    }
    return v;
}

// |a - b| / max(|a|, |b|, floor)
inline double rel_err(double a, double b, double floor = 1e-3) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

} // namespace oracle

namespace oracle {

// Multinomial logistic regression by full-batch gradient descent on raw
// features. rows: samples x features.
inline double linear_classifier_accuracy(const std::vector<std::vector<double>> &train_x,
                                         const std::vector<int> &train_y,
                                         const std::vector<std::vector<double>> &test_x,
                                         const std::vector<int> &test_y, std::size_t classes,
                                         int iterations = 500, double lr = 0.5) {
    const std::size_t d = train_x.front().size();
    std::vector<std::vector<double>> w(classes, std::vector<double>(d + 1, 0.0));
    const auto scores = [&](const std::vector<double> &x) {
        std::vector<double> s(classes);
        for (std::size_t k = 0; k < classes; ++k) {
            s[k] = w[k][d];
            for (std::size_t j = 0; j < d; ++j) {
                s[k] += w[k][j] * x[j];
            }
        }
        return s;
    };
    for (int it = 0; it < iterations; ++it) {
        std::vector<std::vector<double>> grad(classes, std::vector<double>(d + 1, 0.0));
        for (std::size_t i = 0; i < train_x.size(); ++i) {
            std::vector<double> s = scores(train_x[i]);
            const double top = *std::max_element(s.begin(), s.end());
            double z = 0.0;
            for (double &v : s) {
                v = std::exp(v - top);
                z += v;
            }
            for (std::size_t k = 0; k < classes; ++k) {
                const double err = s[k] / z - (static_cast<int>(k) == train_y[i] ? 1.0 : 0.0);
                for (std::size_t j = 0; j < d; ++j) {
                    grad[k][j] += err * train_x[i][j];
                }
                grad[k][d] += err;
            }
        }
        for (std::size_t k = 0; k < classes; ++k) {
            for (std::size_t j = 0; j <= d; ++j) {
                w[k][j] -= lr * grad[k][j] / static_cast<double>(train_x.size());
            }
        }
    }
    std::size_t correct = 0;
    for (std::size_t i = 0; i < test_x.size(); ++i) {
        const std::vector<double> s = scores(test_x[i]);
        const auto best = static_cast<int>(std::max_element(s.begin(), s.end()) - s.begin());
        correct += best == test_y[i] ? 1 : 0;
    }
    return 100.0 * static_cast<double>(correct) / static_cast<double>(test_x.size());
}

} // namespace oracle

namespace oracle {

// Uniformly chosen gate kind with random distinct qubits; RY angles are
// stored as fixed angles.
inline qhybrid::GateOp random_gate(std::size_t n, qhybrid::Rng &rng) {
    using qhybrid::GateKind;
    constexpr GateKind kinds[] = {GateKind::I, GateKind::X,  GateKind::Y,  GateKind::Z,
                                  GateKind::H, GateKind::RY, GateKind::CZ, GateKind::CNOT};
    qhybrid::GateOp op;
    op.kind = kinds[rng.index(n >= 2 ? 8 : 6)];
    op.target = rng.index(n);
    if (op.kind == GateKind::CZ || op.kind == GateKind::CNOT) {
        const std::size_t c = rng.index(n - 1);
        op.control = c >= op.target ? c + 1 : c;
    }
    if (op.kind == GateKind::RY) {
        op.fixed_angle = rng.uniform(-4.0, 4.0);
    }
    return op;
}

} // namespace oracle
