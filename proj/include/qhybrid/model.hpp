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
#include <string>
#include <vector>

#include "qhybrid/ansatz.hpp"
#include "qhybrid/classical.hpp"
#include "qhybrid/network.hpp"
#include "qhybrid/tensor.hpp"

namespace qhybrid {

/// plain: the whole C*T sample is one embedding; hybrid: the quantum block
/// runs on non-overlapping time windows and feeds a convolutional head.
enum class ModelMode { Plain, Hybrid };

/// What maps a window vector to n features. Linear is the classical
/// ablation: a trainable Dense(C*w -> n) in place of embed + ansatz + readout.
enum class FeatureBlock { Quantum, Linear };

struct ModelConfig {
    ModelMode mode = ModelMode::Plain;
    FeatureBlock feature_block = FeatureBlock::Quantum;
    std::size_t channels = 1;
    std::size_t time = 1;
    std::size_t n_qubits = 2;
    std::size_t layers = 1;
    /// Time samples per quantum window (hybrid only).
    std::size_t window = 1;
    bool initial_rotation = true;
    std::size_t num_classes = 2;
    /// Classical post-processing stack; empty selects the default for the mode.
    std::vector<LayerSpec> head;
    std::uint64_t seed = 0;

    [[nodiscard]] std::size_t input_features() const { return channels * time; }
    [[nodiscard]] std::size_t window_length() const { return mode == ModelMode::Plain ? time : window; }
    [[nodiscard]] std::size_t num_windows() const { return mode == ModelMode::Plain ? 1 : time / window; }
    [[nodiscard]] std::size_t window_features() const { return channels * window_length(); }
    [[nodiscard]] AnsatzConfig ansatz() const { return {n_qubits, layers, initial_rotation}; }
};

/// Throws ConfigError/SizeError for inconsistent dimensions.
void validate_config(const ModelConfig &cfg);

/// plain: Dense(n -> K). hybrid: Conv1D(n -> 8) -> BatchNorm -> DepthwiseConv
/// -> ELU -> AvgPool -> Flatten -> Dense(K), kernels clamped to the number of
/// windows. The output Dense is zero-initialized in both cases.
[[nodiscard]] std::vector<LayerSpec> default_head(const ModelConfig &cfg);

/// Per-sample shape entering the head: [n] (plain) or [n, windows] (hybrid).
[[nodiscard]] std::vector<std::size_t> feature_shape(const ModelConfig &cfg);

struct ModelParams {
    /// Input batch norm over the C*T features.
    Tensor input_gamma;
    Tensor input_beta;
    Tensor input_running_mean;
    Tensor input_running_var;
    /// Quantum block angles (empty for the linear block).
    std::vector<double> theta;
    /// Linear block weights [n, C*w] and bias [n] (empty for the quantum block).
    Tensor linear_w;
    Tensor linear_b;
    std::vector<LayerParams> head;
};

struct ModelGradients {
    Tensor input_gamma;
    Tensor input_beta;
    std::vector<double> theta;
    Tensor linear_w;
    Tensor linear_b;
    std::vector<std::vector<Tensor>> head;
};

/// Intermediates of one batch forward pass.
struct ForwardTrace {
    std::uint64_t generation = 0;
    bool training = false;
    std::size_t batch = 0;
    BatchNormForward input_bn;
    /// 1 where a window normalized to (near) zero and the uniform state was used.
    std::vector<unsigned char> zero_window;
    /// [B, n] (plain) or [B, n, windows] (hybrid).
    Tensor features;
    NetTrace head;
    Tensor logits;
};

class Model {
  public:
    /// Fresh parameters drawn from cfg.seed.
    explicit Model(ModelConfig cfg);
    /// Restores previously trained parameters; shapes are validated.
    Model(ModelConfig cfg, ModelParams params);

    [[nodiscard]] const ModelConfig &config() const noexcept { return cfg_; }
    [[nodiscard]] const ModelParams &params() const noexcept { return params_; }
    /// Mutable access invalidates every outstanding trace.
    [[nodiscard]] ModelParams &mutable_params() noexcept {
        ++generation_;
        return params_;
    }
    [[nodiscard]] std::uint64_t generation() const noexcept { return generation_; }

    [[nodiscard]] std::size_t quantum_param_count() const noexcept { return params_.theta.size(); }
    [[nodiscard]] std::size_t classical_param_count() const;

    /// batch is [B, C, T] or [B, C*T].
    [[nodiscard]] ForwardTrace forward(const Tensor &batch, bool training) const;

    /// Throws TraceError if the parameters changed since `trace` was recorded.
    [[nodiscard]] ModelGradients backward(const ForwardTrace &trace, const Tensor &d_logits) const;

    /// Folds training-mode batch statistics into the running statistics.
    void commit_running_stats(const ForwardTrace &trace);

    [[nodiscard]] Tensor logits(const Tensor &batch) const { return forward(batch, false).logits; }
    [[nodiscard]] std::vector<int> predict(const Tensor &batch) const;

  private:
    ModelConfig cfg_;
    ModelParams params_;
    CircuitProgram program_;
    std::uint64_t generation_ = 1;
};

/// Trainable tensors in a fixed order shared by parameters and gradients.
[[nodiscard]] std::vector<std::span<double>> trainable_groups(ModelParams &params);
[[nodiscard]] std::vector<std::span<const double>> gradient_groups(const ModelGradients &grads);
[[nodiscard]] std::vector<std::string> group_names(const ModelParams &params);

/// Adam over every trainable group of a model.
class Trainer {
  public:
    Trainer(Model &model, AdamOptions options);

    /// One minibatch step; returns the mean loss before the update.
    double train_step(const Tensor &batch, std::span<const int> labels);

  private:
    Model &model_;
    std::vector<AdamState> states_;
};

} // namespace qhybrid
