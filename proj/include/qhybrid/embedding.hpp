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

#include <cstddef>
#include <span>
#include <vector>

#include "qhybrid/qstate.hpp"

namespace qhybrid {

struct EmbedConfig {
    std::size_t n_qubits = 1;
    double norm_epsilon = 1e-12;
};

/// Loads x / ||x|| into the first d amplitudes; the rest are zero.
/// Throws SizeError if d > 2^n, ZeroVectorError if ||x|| <= norm_epsilon.
[[nodiscard]] StateVector amplitude_embed(std::span<const double> x, const EmbedConfig &cfg);

/// Vector-Jacobian product of amplitude_embed: J^T g with
/// J = (I - x^ x^T) / ||x|| on the first d coordinates (padding rows are
/// zero, so grad_amp beyond d is ignored). grad_amp has length 2^n.
[[nodiscard]] std::vector<double> embed_backward(std::span<const double> x, std::span<const double> grad_amp,
                                                 const EmbedConfig &cfg);

} // namespace qhybrid
