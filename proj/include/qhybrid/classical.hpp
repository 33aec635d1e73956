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
#include <cstdint>
#include <span>
#include <vector>

#include "qhybrid/tensor.hpp"

/// Layer kernels with hand-written backward passes. Activations are batched
/// along axis 0: dense/batch-norm inputs are [B, F] and convolution inputs
/// are [B, C, L]. Every function is pure; running statistics are returned,
/// not mutated, so callers decide when they change.
namespace qhybrid {

inline constexpr double kBatchNormEpsilon = 1e-5;
inline constexpr double kBatchNormMomentum = 0.1;

struct BatchNormForward {
    Tensor y;
    Tensor x_hat;
    std::vector<double> mean;    // per channel, batch statistics in training mode
    std::vector<double> var;     // biased
    std::vector<double> inv_std; // 1 / sqrt(var + eps)
    bool training = true;
};

/// Per-channel normalization of [B, C] or [B, C, L] (statistics over B and L).
/// Training mode uses batch statistics; eval mode uses the running ones.
[[nodiscard]] BatchNormForward batchnorm_forward(const Tensor &x, const Tensor &gamma, const Tensor &beta,
                                                 const Tensor &running_mean, const Tensor &running_var,
                                                 bool training);

/// running <- (1 - momentum) running + momentum batch; the variance uses
/// the unbiased batch estimate.
void update_running_stats(Tensor &running_mean, Tensor &running_var, const BatchNormForward &fwd,
                          std::size_t count_per_channel, double momentum = kBatchNormMomentum);

struct LayerGrads {
    Tensor dx;
    Tensor dw; // weight or gamma
    Tensor db; // bias or beta
};

[[nodiscard]] LayerGrads batchnorm_backward(const Tensor &dy, const Tensor &gamma, const BatchNormForward &fwd);

/// Cross-correlation with symmetric zero padding. x [B, Cin, L], w [Cout, Cin, K], b [Cout].
[[nodiscard]] Tensor conv1d_forward(const Tensor &x, const Tensor &w, const Tensor &b, std::size_t stride,
                                    std::size_t padding);
[[nodiscard]] LayerGrads conv1d_backward(const Tensor &x, const Tensor &w, const Tensor &dy, std::size_t stride,
                                         std::size_t padding);
[[nodiscard]] std::size_t conv_output_length(std::size_t length, std::size_t kernel, std::size_t stride,
                                             std::size_t padding);

/// Per-channel temporal filter, stride 1. x [B, C, L], w [C, K], b [C].
[[nodiscard]] Tensor depthwise_forward(const Tensor &x, const Tensor &w, const Tensor &b, std::size_t padding);
[[nodiscard]] LayerGrads depthwise_backward(const Tensor &x, const Tensor &w, const Tensor &dy,
                                            std::size_t padding);

/// Non-overlapping mean over `width` samples; a trailing remainder is dropped.
[[nodiscard]] Tensor avgpool_forward(const Tensor &x, std::size_t width);
[[nodiscard]] Tensor avgpool_backward(const Tensor &dy, const std::vector<std::size_t> &input_shape,
                                      std::size_t width);

/// y = x w^T + b. x [B, in], w [out, in], b [out].
[[nodiscard]] Tensor dense_forward(const Tensor &x, const Tensor &w, const Tensor &b);
[[nodiscard]] LayerGrads dense_backward(const Tensor &x, const Tensor &w, const Tensor &dy);

[[nodiscard]] Tensor elu_forward(const Tensor &x, double alpha = 1.0);
[[nodiscard]] Tensor elu_backward(const Tensor &x, const Tensor &dy, double alpha = 1.0);

[[nodiscard]] Tensor softmax(const Tensor &logits);

struct LossResult {
    double loss = 0.0;
    Tensor d_logits;
};

/// Mean of -log softmax(logits)[label]; d_logits = (softmax - onehot) / B.
/// Throws LabelError for labels outside [0, K).
[[nodiscard]] LossResult softmax_cross_entropy(const Tensor &logits, std::span<const int> labels);

/// Index of the largest logit per row; ties go to the lowest index.
[[nodiscard]] std::vector<int> argmax_rows(const Tensor &logits);

struct AdamOptions {
    double lr = 0.1;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct AdamState {
    AdamState() = default;
    AdamState(std::size_t n, AdamOptions opts) : m(n, 0.0), v(n, 0.0), options(opts) {}

    std::vector<double> m;
    std::vector<double> v;
    std::uint64_t t = 0;
    AdamOptions options;
};

/// Bias-corrected Adam update in place; increments state.t.
void adam_step(std::span<double> params, std::span<const double> grads, AdamState &state);

} // namespace qhybrid
