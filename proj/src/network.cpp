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
#include "qhybrid/network.hpp"

#include <cmath>

#include "qhybrid/errors.hpp"

namespace qhybrid {

namespace {

template <class... Ts> struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

Tensor glorot(std::vector<std::size_t> shape, std::size_t fan_in, std::size_t fan_out, Rng &rng) {
    Tensor t(std::move(shape));
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (double &v : t.data()) {
        v = rng.uniform(-limit, limit);
    }
    return t;
}

void require(bool ok, const std::string &what) {
    if (!ok) {
        throw SizeError(what);
    }
}

} // namespace

std::string layer_name(const LayerSpec &spec) {
    return std::visit(overloaded{
                          [](const BatchNormSpec &) { return std::string("BatchNorm"); },
                          [](const Conv1DSpec &) { return std::string("Conv1D"); },
                          [](const DepthwiseConvSpec &) { return std::string("DepthwiseConv"); },
                          [](const AvgPoolSpec &) { return std::string("AvgPool"); },
                          [](const DenseSpec &) { return std::string("Dense"); },
                          [](const EluSpec &) { return std::string("ELU"); },
                          [](const FlattenSpec &) { return std::string("Flatten"); },
                      },
                      spec);
}

std::vector<std::size_t> layer_output_shape(const LayerSpec &spec, const std::vector<std::size_t> &in) {
    const std::string name = layer_name(spec);
    return std::visit(
        overloaded{
            [&](const BatchNormSpec &s) {
                require(!in.empty() && in.size() <= 2 && in[0] == s.features && s.features > 0,
                        name + ": feature count mismatch");
                return in;
            },
            [&](const Conv1DSpec &s) {
                require(in.size() == 2 && in[0] == s.in_channels && s.out_channels > 0,
                        name + ": expects [" + std::to_string(s.in_channels) + ", L] input");
                return std::vector<std::size_t>{s.out_channels,
                                                conv_output_length(in[1], s.kernel, s.stride, s.padding)};
            },
            [&](const DepthwiseConvSpec &s) {
                require(in.size() == 2 && in[0] == s.channels, name + ": channel count mismatch");
                return std::vector<std::size_t>{s.channels, conv_output_length(in[1], s.kernel, 1, s.padding)};
            },
            [&](const AvgPoolSpec &s) {
                require(in.size() == 2 && s.width >= 1 && s.width <= in[1], name + ": width invalid for input");
                return std::vector<std::size_t>{in[0], in[1] / s.width};
            },
            [&](const DenseSpec &s) {
                require(in.size() == 1 && in[0] == s.in && s.out > 0, name + ": expects [" + std::to_string(s.in) +
                                                                          "] input");
                return std::vector<std::size_t>{s.out};
            },
            [&](const EluSpec &) { return in; },
            [&](const FlattenSpec &) { return std::vector<std::size_t>{shape_product(in)}; },
        },
        spec);
}

LayerParams init_layer(const LayerSpec &spec, Rng &rng) {
    LayerParams p;
    std::visit(overloaded{
                   [&](const BatchNormSpec &s) {
                       p.trainable = {Tensor({s.features}, 1.0), Tensor({s.features}, 0.0)};
                       p.running_mean = Tensor({s.features}, 0.0);
                       p.running_var = Tensor({s.features}, 1.0);
                   },
                   [&](const Conv1DSpec &s) {
                       p.trainable = {glorot({s.out_channels, s.in_channels, s.kernel}, s.in_channels * s.kernel,
                                             s.out_channels * s.kernel, rng),
                                      Tensor({s.out_channels})};
                   },
                   [&](const DepthwiseConvSpec &s) {
                       p.trainable = {glorot({s.channels, s.kernel}, s.kernel, s.kernel, rng),
                                      Tensor({s.channels})};
                   },
                   [&](const DenseSpec &s) {
                       p.trainable = {s.zero_init ? Tensor({s.out, s.in}) : glorot({s.out, s.in}, s.in, s.out, rng),
                                      Tensor({s.out})};
                   },
                   [](const auto &) {},
               },
               spec);
    return p;
}

std::size_t trainable_size(const LayerParams &params) {
    std::size_t n = 0;
    for (const Tensor &t : params.trainable) {
        n += t.size();
    }
    return n;
}

NetTrace net_forward(const std::vector<LayerSpec> &specs, const std::vector<LayerParams> &params, const Tensor &x,
                     bool training) {
    require(specs.size() == params.size(), "layer parameter count mismatch");
    NetTrace trace;
    trace.inputs.reserve(specs.size());
    trace.batchnorm.resize(specs.size());
    Tensor act = x;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        const LayerParams &p = params[i];
        trace.inputs.push_back(act);
        act = std::visit(overloaded{
                             [&](const BatchNormSpec &) {
                                 trace.batchnorm[i] = batchnorm_forward(act, p.trainable[0], p.trainable[1],
                                                                        p.running_mean, p.running_var, training);
                                 return trace.batchnorm[i]->y;
                             },
                             [&](const Conv1DSpec &s) {
                                 return conv1d_forward(act, p.trainable[0], p.trainable[1], s.stride, s.padding);
                             },
                             [&](const DepthwiseConvSpec &s) {
                                 return depthwise_forward(act, p.trainable[0], p.trainable[1], s.padding);
                             },
                             [&](const AvgPoolSpec &s) { return avgpool_forward(act, s.width); },
                             [&](const DenseSpec &) { return dense_forward(act, p.trainable[0], p.trainable[1]); },
                             [&](const EluSpec &) { return elu_forward(act); },
                             [&](const FlattenSpec &) {
                                 return act.reshaped({act.dim(0), act.size() / act.dim(0)});
                             },
                         },
                         specs[i]);
    }
    trace.output = std::move(act);
    return trace;
}

NetGrads net_backward(const std::vector<LayerSpec> &specs, const std::vector<LayerParams> &params,
                      const NetTrace &trace, const Tensor &dy) {
    require(trace.inputs.size() == specs.size(), "trace does not match network");
    require(dy.shape() == trace.output.shape(), "output gradient shape mismatch");
    NetGrads grads;
    grads.layers.resize(specs.size());
    Tensor d = dy;
    for (std::size_t i = specs.size(); i-- > 0;) {
        const LayerParams &p = params[i];
        const Tensor &x = trace.inputs[i];
        auto &out = grads.layers[i];
        d = std::visit(overloaded{
                           [&](const BatchNormSpec &) {
                               LayerGrads g = batchnorm_backward(d, p.trainable[0], *trace.batchnorm[i]);
                               out = {std::move(g.dw), std::move(g.db)};
                               return std::move(g.dx);
                           },
                           [&](const Conv1DSpec &s) {
                               LayerGrads g = conv1d_backward(x, p.trainable[0], d, s.stride, s.padding);
                               out = {std::move(g.dw), std::move(g.db)};
                               return std::move(g.dx);
                           },
                           [&](const DepthwiseConvSpec &s) {
                               LayerGrads g = depthwise_backward(x, p.trainable[0], d, s.padding);
                               out = {std::move(g.dw), std::move(g.db)};
                               return std::move(g.dx);
                           },
                           [&](const AvgPoolSpec &s) { return avgpool_backward(d, x.shape(), s.width); },
                           [&](const DenseSpec &) {
                               LayerGrads g = dense_backward(x, p.trainable[0], d);
                               out = {std::move(g.dw), std::move(g.db)};
                               return std::move(g.dx);
                           },
                           [&](const EluSpec &) { return elu_backward(x, d); },
                           [&](const FlattenSpec &) { return d.reshaped(x.shape()); },
                       },
                       specs[i]);
    }
    grads.dx = std::move(d);
    return grads;
}

void commit_running_stats(const std::vector<LayerSpec> &specs, std::vector<LayerParams> &params,
                          const NetTrace &trace) {
    for (std::size_t i = 0; i < specs.size(); ++i) {
        if (!std::holds_alternative<BatchNormSpec>(specs[i]) || !trace.batchnorm[i] || !trace.batchnorm[i]->training) {
            continue;
        }
        const Tensor &x = trace.inputs[i];
        const std::size_t per_channel = x.size() / x.dim(1);
        update_running_stats(params[i].running_mean, params[i].running_var, *trace.batchnorm[i], per_channel);
    }
}

} // namespace qhybrid
