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
#include "qhybrid/embedding.hpp"

#include <cmath>
#include <string>

#include "qhybrid/errors.hpp"

namespace qhybrid {

namespace {

double checked_norm(std::span<const double> x, const EmbedConfig &cfg) {
    if (cfg.n_qubits < 1 || cfg.n_qubits > kMaxQubits) {
        throw SizeError("embedding qubit count out of range");
    }
    if (x.empty() || x.size() > (std::size_t{1} << cfg.n_qubits)) {
        throw SizeError("feature length " + std::to_string(x.size()) + " does not fit " +
                        std::to_string(cfg.n_qubits) + " qubits");
    }
    double sq = 0.0;
    for (const double v : x) {
        if (!std::isfinite(v)) {
            throw SizeError("non-finite feature value");
        }
        sq += v * v;
    }
    const double r = std::sqrt(sq);
    if (r <= cfg.norm_epsilon) {
        throw ZeroVectorError("feature vector norm " + std::to_string(r) + " too small to embed");
    }
    return r;
}

} // namespace

StateVector amplitude_embed(std::span<const double> x, const EmbedConfig &cfg) {
    const double r = checked_norm(x, cfg);
    std::vector<Complex> amps(std::size_t{1} << cfg.n_qubits);
    for (std::size_t i = 0; i < x.size(); ++i) {
        amps[i] = x[i] / r;
    }
    return StateVector(cfg.n_qubits, std::move(amps));
}

std::vector<double> embed_backward(std::span<const double> x, std::span<const double> grad_amp,
                                   const EmbedConfig &cfg) {
    const double r = checked_norm(x, cfg);
    if (grad_amp.size() != (std::size_t{1} << cfg.n_qubits)) {
        throw SizeError("amplitude gradient length must be 2^n");
    }
    double radial = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        radial += (x[i] / r) * grad_amp[i];
    }
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = (grad_amp[i] - (x[i] / r) * radial) / r;
    }
    return out;
}

} // namespace qhybrid
