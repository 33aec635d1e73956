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
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qhybrid/classical.hpp"
#include "qhybrid/random.hpp"
#include "qhybrid/tensor.hpp"

namespace qhybrid {

struct BatchNormSpec {
    std::size_t features = 0;
};
struct Conv1DSpec {
    std::size_t in_channels = 0;
    std::size_t out_channels = 0;
    std::size_t kernel = 1;
    std::size_t stride = 1;
    std::size_t padding = 0;
};
struct DepthwiseConvSpec {
    std::size_t channels = 0;
    std::size_t kernel = 1;
    std::size_t padding = 0;
};
struct AvgPoolSpec {
    std::size_t width = 1;
};
struct DenseSpec {
    std::size_t in = 0;
    std::size_t out = 0;
    /// Zero weights at init (used for output heads so training starts from
    /// uniform predictions).
    bool zero_init = false;
};
struct EluSpec {};
struct FlattenSpec {};

using LayerSpec =
    std::variant<BatchNormSpec, Conv1DSpec, DepthwiseConvSpec, AvgPoolSpec, DenseSpec, EluSpec, FlattenSpec>;

[[nodiscard]] std::string layer_name(const LayerSpec &spec);

/// Trainable tensors of one layer (weight/gamma first, then bias/beta) and,
/// for batch norm, its running statistics.
struct LayerParams {
    std::vector<Tensor> trainable;
    Tensor running_mean;
    Tensor running_var;
};

/// Validates dimensions and returns the per-sample output shape for a given
/// per-sample input shape. Throws SizeError on mismatch.
[[nodiscard]] std::vector<std::size_t> layer_output_shape(const LayerSpec &spec,
                                                          const std::vector<std::size_t> &sample_shape);

/// Glorot-uniform weights (+-sqrt(6 / (fan_in + fan_out))), zero biases,
/// unit gamma, zero beta, running stats (0, 1).
[[nodiscard]] LayerParams init_layer(const LayerSpec &spec, Rng &rng);

[[nodiscard]] std::size_t trainable_size(const LayerParams &params);

struct NetTrace {
    /// inputs[i] is the activation entering layer i; output is the final one.
    std::vector<Tensor> inputs;
    std::vector<std::optional<BatchNormForward>> batchnorm;
    Tensor output;
};

[[nodiscard]] NetTrace net_forward(const std::vector<LayerSpec> &specs, const std::vector<LayerParams> &params,
                                   const Tensor &x, bool training);

struct NetGrads {
    /// Gradients laid out like LayerParams::trainable.
    std::vector<std::vector<Tensor>> layers;
    Tensor dx;
};

[[nodiscard]] NetGrads net_backward(const std::vector<LayerSpec> &specs, const std::vector<LayerParams> &params,
                                    const NetTrace &trace, const Tensor &dy);

/// Folds the batch statistics recorded in a training-mode trace into the
/// running statistics of every batch-norm layer.
void commit_running_stats(const std::vector<LayerSpec> &specs, std::vector<LayerParams> &params,
                          const NetTrace &trace);

} // namespace qhybrid
