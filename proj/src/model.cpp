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
#include "qhybrid/model.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>

#include "qhybrid/embedding.hpp"
#include "qhybrid/errors.hpp"
#include "qhybrid/measurement.hpp"
#include "qhybrid/parallel.hpp"

namespace qhybrid {

namespace {

constexpr std::uint64_t kHeadSeedOffset = 0x9E3779B97F4A7C15ULL;

std::atomic<bool> g_zero_window_logged{false};
std::atomic<bool> g_tail_logged{false};

void log_once(std::atomic<bool> &flag, const std::string &message) {
    if (!flag.exchange(true)) {
        std::cerr << "qhybrid: " << message << '\n';
    }
}

Tensor flatten_batch(const Tensor &batch, const ModelConfig &cfg) {
    const std::size_t features = cfg.input_features();
    if (batch.rank() == 3 && batch.dim(1) == cfg.channels && batch.dim(2) == cfg.time) {
        return batch.reshaped({batch.dim(0), features});
    }
    if (batch.rank() == 2 && batch.dim(1) == features) {
        return batch;
    }
    throw SizeError("batch shape " + batch.shape_string() + " does not match [B, " + std::to_string(cfg.channels) +
                    ", " + std::to_string(cfg.time) + "]");
}

/// v[c * w + j] = z[b, c * T + k * w + j]
std::vector<double> gather_window(const Tensor &z, std::size_t b, std::size_t k, const ModelConfig &cfg) {
    const std::size_t w = cfg.window_length();
    std::vector<double> v(cfg.window_features());
    for (std::size_t c = 0; c < cfg.channels; ++c) {
        for (std::size_t j = 0; j < w; ++j) {
            v[c * w + j] = z.at(b, c * cfg.time + k * w + j);
        }
    }
    return v;
}

void scatter_window(Tensor &dz, std::span<const double> dv, std::size_t b, std::size_t k, const ModelConfig &cfg) {
    const std::size_t w = cfg.window_length();
    for (std::size_t c = 0; c < cfg.channels; ++c) {
        for (std::size_t j = 0; j < w; ++j) {
            dz.at(b, c * cfg.time + k * w + j) = dv[c * w + j];
        }
    }
}

bool is_zero_vector(std::span<const double> v) {
    double sq = 0.0;
    for (const double x : v) {
        sq += x * x;
    }
    return std::sqrt(sq) <= EmbedConfig{}.norm_epsilon;
}

StateVector uniform_state(std::size_t n_qubits) {
    const std::size_t dim = std::size_t{1} << n_qubits;
    return StateVector(n_qubits, std::vector<Complex>(dim, Complex{1.0 / std::sqrt(static_cast<double>(dim))}));
}

void check_tensor(const Tensor &t, const std::vector<std::size_t> &shape, const char *name) {
    if (t.shape() != shape) {
        throw ConfigError(std::string("parameter ") + name + " has shape " + t.shape_string());
    }
}

} // namespace

void validate_config(const ModelConfig &cfg) {
    if (cfg.channels < 1 || cfg.time < 1) {
        throw ConfigError("channels and time must be positive");
    }
    if (cfg.num_classes < 2) {
        throw ConfigError("num_classes must be at least 2");
    }
    (void)param_count(cfg.n_qubits, cfg.layers);
    if (cfg.mode == ModelMode::Hybrid && (cfg.window < 1 || cfg.window > cfg.time)) {
        throw ConfigError("window must be in [1, time]");
    }
    if (cfg.feature_block == FeatureBlock::Quantum && cfg.window_features() > (std::size_t{1} << cfg.n_qubits)) {
        throw SizeError(std::to_string(cfg.window_features()) + " window features exceed the " +
                        std::to_string(std::size_t{1} << cfg.n_qubits) + " amplitudes of " +
                        std::to_string(cfg.n_qubits) + " qubits");
    }
    auto shape = feature_shape(cfg);
    const auto head = cfg.head.empty() ? default_head(cfg) : cfg.head;
    for (const LayerSpec &spec : head) {
        shape = layer_output_shape(spec, shape);
    }
    if (shape != std::vector<std::size_t>{cfg.num_classes}) {
        throw ConfigError("classical head does not end in [" + std::to_string(cfg.num_classes) + "] logits");
    }
}

std::vector<std::size_t> feature_shape(const ModelConfig &cfg) {
    if (cfg.mode == ModelMode::Plain) {
        return {cfg.n_qubits};
    }
    return {cfg.n_qubits, cfg.num_windows()};
}

std::vector<LayerSpec> default_head(const ModelConfig &cfg) {
    if (cfg.mode == ModelMode::Plain) {
        return {DenseSpec{cfg.n_qubits, cfg.num_classes, true}};
    }
    constexpr std::size_t filters = 8;
    const std::size_t windows = cfg.num_windows();
    const std::size_t k1 = std::min<std::size_t>(8, windows);
    const std::size_t p1 = (k1 - 1) / 2;
    const std::size_t l1 = conv_output_length(windows, k1, 1, p1);
    const std::size_t k2 = std::min<std::size_t>(3, l1);
    const std::size_t p2 = (k2 - 1) / 2;
    const std::size_t l2 = conv_output_length(l1, k2, 1, p2);
    const std::size_t pool = std::min<std::size_t>(4, l2);
    const std::size_t l3 = l2 / pool;
    return {
        Conv1DSpec{cfg.n_qubits, filters, k1, 1, p1},
        BatchNormSpec{filters},
        DepthwiseConvSpec{filters, k2, p2},
        EluSpec{},
        AvgPoolSpec{pool},
        FlattenSpec{},
        DenseSpec{filters * l3, cfg.num_classes, true},
    };
}

// ---------------------------------------------------------------------------

Model::Model(ModelConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.head.empty()) {
        cfg_.head = default_head(cfg_);
    }
    validate_config(cfg_);
    if (cfg_.mode == ModelMode::Hybrid && cfg_.time % cfg_.window != 0) {
        log_once(g_tail_logged, "window " + std::to_string(cfg_.window) + " does not divide time " +
                                    std::to_string(cfg_.time) + "; trailing samples are dropped");
    }

    const std::size_t f = cfg_.input_features();
    params_.input_gamma = Tensor({f}, 1.0);
    params_.input_beta = Tensor({f}, 0.0);
    params_.input_running_mean = Tensor({f}, 0.0);
    params_.input_running_var = Tensor({f}, 1.0);

    Rng rng(cfg_.seed ^ kHeadSeedOffset);
    if (cfg_.feature_block == FeatureBlock::Quantum) {
        params_.theta = init_params(cfg_.ansatz(), cfg_.seed);
        program_ = build_circuit(cfg_.ansatz(), params_.theta);
    } else {
        const std::size_t in = cfg_.window_features();
        const double limit = std::sqrt(6.0 / static_cast<double>(in + cfg_.n_qubits));
        params_.linear_w = Tensor({cfg_.n_qubits, in});
        for (double &w : params_.linear_w.data()) {
            w = rng.uniform(-limit, limit);
        }
        params_.linear_b = Tensor({cfg_.n_qubits});
    }
    for (const LayerSpec &spec : cfg_.head) {
        params_.head.push_back(init_layer(spec, rng));
    }
}

Model::Model(ModelConfig cfg, ModelParams params) : Model(std::move(cfg)) {
    const std::size_t f = cfg_.input_features();
    check_tensor(params.input_gamma, {f}, "input_gamma");
    check_tensor(params.input_beta, {f}, "input_beta");
    check_tensor(params.input_running_mean, {f}, "input_running_mean");
    check_tensor(params.input_running_var, {f}, "input_running_var");
    if (params.theta.size() != params_.theta.size()) {
        throw ConfigError("quantum parameter count " + std::to_string(params.theta.size()) + " != " +
                          std::to_string(params_.theta.size()));
    }
    if (cfg_.feature_block == FeatureBlock::Linear) {
        check_tensor(params.linear_w, params_.linear_w.shape(), "linear_w");
        check_tensor(params.linear_b, params_.linear_b.shape(), "linear_b");
    }
    if (params.head.size() != params_.head.size()) {
        throw ConfigError("head layer count mismatch");
    }
    for (std::size_t i = 0; i < params.head.size(); ++i) {
        const auto &want = params_.head[i].trainable;
        const auto &got = params.head[i].trainable;
        if (got.size() != want.size()) {
            throw ConfigError("head layer " + std::to_string(i) + " tensor count mismatch");
        }
        for (std::size_t j = 0; j < got.size(); ++j) {
            check_tensor(got[j], want[j].shape(), "head");
        }
        check_tensor(params.head[i].running_mean, params_.head[i].running_mean.shape(), "head running_mean");
        check_tensor(params.head[i].running_var, params_.head[i].running_var.shape(), "head running_var");
    }
    params_ = std::move(params);
}

std::size_t Model::classical_param_count() const {
    std::size_t n = params_.input_gamma.size() + params_.input_beta.size() + params_.linear_w.size() +
                    params_.linear_b.size();
    for (const LayerParams &p : params_.head) {
        n += trainable_size(p);
    }
    return n;
}

ForwardTrace Model::forward(const Tensor &batch, bool training) const {
    const Tensor x = flatten_batch(batch, cfg_);
    ForwardTrace trace;
    trace.generation = generation_;
    trace.training = training;
    trace.batch = x.dim(0);
    trace.input_bn = batchnorm_forward(x, params_.input_gamma, params_.input_beta, params_.input_running_mean,
                                       params_.input_running_var, training);
    const Tensor &z = trace.input_bn.y;

    const std::size_t batch_size = trace.batch;
    const std::size_t windows = cfg_.num_windows();
    const std::size_t n = cfg_.n_qubits;
    Tensor features({batch_size, n, windows});
    trace.zero_window.assign(batch_size * windows, 0);

    parallel_for(batch_size * windows, [&](std::size_t idx) {
        const std::size_t b = idx / windows;
        const std::size_t k = idx % windows;
        const std::vector<double> v = gather_window(z, b, k, cfg_);
        if (cfg_.feature_block == FeatureBlock::Linear) {
            for (std::size_t q = 0; q < n; ++q) {
                double acc = params_.linear_b[q];
                for (std::size_t i = 0; i < v.size(); ++i) {
                    acc += params_.linear_w.at(q, i) * v[i];
                }
                features.at(b, q, k) = acc;
            }
            return;
        }
        StateVector state(n);
        if (is_zero_vector(v)) {
            trace.zero_window[idx] = 1;
            log_once(g_zero_window_logged, "zero-norm window after batch norm; using the uniform state");
            state = uniform_state(n);
        } else {
            state = amplitude_embed(v, {n, EmbedConfig{}.norm_epsilon});
        }
        apply_program(state, program_, params_.theta);
        const std::vector<double> z_exp = expect_z_all(state);
        for (std::size_t q = 0; q < n; ++q) {
            features.at(b, q, k) = z_exp[q];
        }
    });

    trace.features = cfg_.mode == ModelMode::Plain ? features.reshaped({batch_size, n}) : std::move(features);
    trace.head = net_forward(cfg_.head, params_.head, trace.features, training);
    trace.logits = trace.head.output;
    return trace;
}

ModelGradients Model::backward(const ForwardTrace &trace, const Tensor &d_logits) const {
    if (trace.generation != generation_) {
        throw TraceError("trace was recorded against an older parameter set");
    }
    if (d_logits.shape() != trace.logits.shape()) {
        throw SizeError("logit gradient shape mismatch");
    }
    ModelGradients g;
    NetGrads head = net_backward(cfg_.head, params_.head, trace.head, d_logits);
    g.head = std::move(head.layers);

    const std::size_t batch_size = trace.batch;
    const std::size_t windows = cfg_.num_windows();
    const std::size_t n = cfg_.n_qubits;
    const Tensor d_feat = head.dx.reshaped({batch_size, n, windows});
    const Tensor &z = trace.input_bn.y;
    Tensor dz({batch_size, cfg_.input_features()});

    if (cfg_.feature_block == FeatureBlock::Linear) {
        g.linear_w = Tensor(params_.linear_w.shape());
        g.linear_b = Tensor(params_.linear_b.shape());
        for (std::size_t b = 0; b < batch_size; ++b) {
            for (std::size_t k = 0; k < windows; ++k) {
                const std::vector<double> v = gather_window(z, b, k, cfg_);
                std::vector<double> dv(v.size(), 0.0);
                for (std::size_t q = 0; q < n; ++q) {
                    const double u = d_feat.at(b, q, k);
                    g.linear_b[q] += u;
                    for (std::size_t i = 0; i < v.size(); ++i) {
                        g.linear_w.at(q, i) += u * v[i];
                        dv[i] += u * params_.linear_w.at(q, i);
                    }
                }
                scatter_window(dz, dv, b, k, cfg_);
            }
        }
    } else {
        const std::size_t slots = params_.theta.size();
        std::vector<double> per_window(batch_size * windows * slots, 0.0);
        parallel_for(batch_size * windows, [&](std::size_t idx) {
            const std::size_t b = idx / windows;
            const std::size_t k = idx % windows;
            std::vector<double> upstream(n);
            for (std::size_t q = 0; q < n; ++q) {
                upstream[q] = d_feat.at(b, q, k);
            }
            const std::vector<double> v = gather_window(z, b, k, cfg_);
            const EmbedConfig embed{n, EmbedConfig{}.norm_epsilon};
            const bool zero = trace.zero_window[idx] != 0;
            const StateVector input = zero ? uniform_state(n) : amplitude_embed(v, embed);
            const QuantumGradients qg = adjoint_grad(program_, params_.theta, input, upstream);
            std::copy(qg.d_theta.begin(), qg.d_theta.end(), per_window.begin() + static_cast<std::ptrdiff_t>(idx * slots));
            if (!zero) {
                scatter_window(dz, embed_backward(v, qg.d_input, embed), b, k, cfg_);
            }
        });
        g.theta.assign(slots, 0.0);
        for (std::size_t idx = 0; idx < batch_size * windows; ++idx) {
            for (std::size_t s = 0; s < slots; ++s) {
                g.theta[s] += per_window[idx * slots + s];
            }
        }
    }

    LayerGrads bn = batchnorm_backward(dz, params_.input_gamma, trace.input_bn);
    g.input_gamma = std::move(bn.dw);
    g.input_beta = std::move(bn.db);
    return g;
}

void Model::commit_running_stats(const ForwardTrace &trace) {
    if (!trace.training) {
        return;
    }
    update_running_stats(params_.input_running_mean, params_.input_running_var, trace.input_bn, trace.batch);
    qhybrid::commit_running_stats(cfg_.head, params_.head, trace.head);
}

std::vector<int> Model::predict(const Tensor &batch) const { return argmax_rows(logits(batch)); }

// ---------------------------------------------------------------------------

std::vector<std::span<double>> trainable_groups(ModelParams &params) {
    std::vector<std::span<double>> out{params.input_gamma.data(), params.input_beta.data()};
    if (!params.theta.empty()) {
        out.emplace_back(params.theta);
    }
    if (!params.linear_w.empty()) {
        out.push_back(params.linear_w.data());
        out.push_back(params.linear_b.data());
    }
    for (LayerParams &layer : params.head) {
        for (Tensor &t : layer.trainable) {
            out.push_back(t.data());
        }
    }
    return out;
}

std::vector<std::span<const double>> gradient_groups(const ModelGradients &grads) {
    std::vector<std::span<const double>> out{grads.input_gamma.data(), grads.input_beta.data()};
    if (!grads.theta.empty()) {
        out.emplace_back(grads.theta);
    }
    if (!grads.linear_w.empty()) {
        out.push_back(grads.linear_w.data());
        out.push_back(grads.linear_b.data());
    }
    for (const auto &layer : grads.head) {
        for (const Tensor &t : layer) {
            out.push_back(t.data());
        }
    }
    return out;
}

std::vector<std::string> group_names(const ModelParams &params) {
    std::vector<std::string> out{"input.gamma", "input.beta"};
    if (!params.theta.empty()) {
        out.emplace_back("quantum.theta");
    }
    if (!params.linear_w.empty()) {
        out.emplace_back("linear.weight");
        out.emplace_back("linear.bias");
    }
    for (std::size_t i = 0; i < params.head.size(); ++i) {
        for (std::size_t j = 0; j < params.head[i].trainable.size(); ++j) {
            out.push_back("head." + std::to_string(i) + (j == 0 ? ".weight" : ".bias"));
        }
    }
    return out;
}

Trainer::Trainer(Model &model, AdamOptions options) : model_(model) {
    for (const auto group : trainable_groups(model_.mutable_params())) {
        states_.emplace_back(group.size(), options);
    }
}

double Trainer::train_step(const Tensor &batch, std::span<const int> labels) {
    if (batch.rank() < 1 || batch.dim(0) == 0) {
        throw SizeError("train_step needs a non-empty batch");
    }
    const ForwardTrace trace = model_.forward(batch, true);
    const LossResult loss = softmax_cross_entropy(trace.logits, labels);
    const ModelGradients grads = model_.backward(trace, loss.d_logits);
    model_.commit_running_stats(trace);

    const auto groups = trainable_groups(model_.mutable_params());
    const auto grad_groups = gradient_groups(grads);
    for (std::size_t i = 0; i < groups.size(); ++i) {
        adam_step(groups[i], grad_groups[i], states_[i]);
    }
    return loss.loss;
}

} // namespace qhybrid
