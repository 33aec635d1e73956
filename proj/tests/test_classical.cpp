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
#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "oracle.hpp"
#include "qhybrid/classical.hpp"
#include "qhybrid/errors.hpp"
#include "qhybrid/network.hpp"

namespace {

using namespace qhybrid;

Tensor random_tensor(std::vector<std::size_t> shape, Rng &rng, double scale = 1.0) {
    Tensor t(std::move(shape));
    for (std::size_t i = 0; i < t.size(); ++i) {
        t[i] = scale * rng.normal();
    }
    return t;
}

double dot(const Tensor &a, const Tensor &b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

// Checks analytic d/dt <dy, f(t)> against central differences for every
// coordinate of t (f reads t by reference).
void check_grad(Tensor &t, const Tensor &analytic, const Tensor &dy, const std::function<Tensor()> &f,
                const char *what, double h = 1e-5) {
    ASSERT_EQ(analytic.shape(), t.shape()) << what;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double saved = t[i];
        t[i] = saved + h;
        const double plus = dot(dy, f());
        t[i] = saved - h;
        const double minus = dot(dy, f());
        t[i] = saved;
        const double fd = (plus - minus) / (2.0 * h);
        ASSERT_LE(oracle::rel_err(analytic[i], fd), 1e-5) << what << " index " << i << ": " << analytic[i] << " vs "
                                                          << fd;
    }
}

TEST(BatchNorm, Examples) {
    const Tensor gamma({1}, 1.0);
    const Tensor beta({1}, 0.0);
    const Tensor rm({1}, 0.0);
    const Tensor rv({1}, 1.0);
    const auto two = batchnorm_forward(Tensor({2, 1}, {1.0, 3.0}), gamma, beta, rm, rv, true);
    EXPECT_NEAR(two.y[0], -1.0, 1e-4);
    EXPECT_NEAR(two.y[1], 1.0, 1e-4);

    const Tensor beta_c({1}, 0.7);
    const auto flat = batchnorm_forward(Tensor({5, 1}, 2.5), gamma, beta_c, rm, rv, true);
    for (std::size_t i = 0; i < 5; ++i) {
        EXPECT_DOUBLE_EQ(flat.y[i], 0.7);
    }

    // already standardized columns pass through
    const Tensor x({4, 2}, {1, -1, -1, 1, 1, 1, -1, -1});
    const auto id = batchnorm_forward(x, Tensor({2}, 1.0), Tensor({2}, 0.0), Tensor({2}), Tensor({2}, 1.0), true);
    for (std::size_t i = 0; i < x.size(); ++i) {
        EXPECT_NEAR(id.y[i], x[i], 1e-5);
    }

    EXPECT_THROW((void)batchnorm_forward(Tensor({0, 1}), gamma, beta, rm, rv, true), SizeError);
}

TEST(BatchNorm, EvalModeIsBatchIndependent) {
    Rng rng(1);
    const Tensor gamma = random_tensor({3}, rng);
    const Tensor beta = random_tensor({3}, rng);
    const Tensor rm = random_tensor({3}, rng);
    const Tensor rv({3}, 2.0);
    const Tensor big = random_tensor({6, 3, 4}, rng);
    const auto full = batchnorm_forward(big, gamma, beta, rm, rv, false);
    for (std::size_t b = 0; b < 6; ++b) {
        Tensor one({1, 3, 4});
        std::copy(big.row(b).begin(), big.row(b).end(), one.data().begin());
        const auto single = batchnorm_forward(one, gamma, beta, rm, rv, false);
        for (std::size_t i = 0; i < 12; ++i) {
            EXPECT_EQ(single.y[i], full.y[b * 12 + i]);
        }
    }
}

TEST(BatchNorm, RunningStatistics) {
    const Tensor x({4, 1}, {1.0, 2.0, 3.0, 6.0});
    const auto fwd = batchnorm_forward(x, Tensor({1}, 1.0), Tensor({1}, 0.0), Tensor({1}), Tensor({1}, 1.0), true);
    Tensor rm({1}, 0.0);
    Tensor rv({1}, 1.0);
    update_running_stats(rm, rv, fwd, 4);
    // mean 3, unbiased variance (4 + 1 + 0 + 9) / 3
    EXPECT_NEAR(rm[0], 0.1 * 3.0, 1e-15);
    EXPECT_NEAR(rv[0], 0.9 + 0.1 * (14.0 / 3.0), 1e-14);
}

TEST(CrossEntropy, Examples) {
    const std::vector<int> zero{0};
    const std::vector<int> one{1};
    EXPECT_NEAR(softmax_cross_entropy(Tensor({1, 4}, 0.3), zero).loss, std::log(4.0), 1e-12);
    EXPECT_LT(softmax_cross_entropy(Tensor({1, 2}, {10.0, -10.0}), zero).loss, 1e-8);
    EXPECT_NEAR(softmax_cross_entropy(Tensor({1, 2}, {1.0, 2.0}), one).loss, std::log(1.0 + std::exp(-1.0)), 1e-12);
    EXPECT_NEAR(softmax_cross_entropy(Tensor({1, 2}, {1.0, 2.0}), one).loss, 0.313262, 1e-6);
    const std::vector<int> bad{4};
    EXPECT_THROW((void)softmax_cross_entropy(Tensor({1, 4}), bad), LabelError);
    const std::vector<int> negative{-1};
    EXPECT_THROW((void)softmax_cross_entropy(Tensor({1, 4}), negative), LabelError);
}

TEST(CrossEntropy, NonNegativeAndGradient) {
    Rng rng(2);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t b = 1 + rng.index(5);
        const std::size_t k = 2 + rng.index(5);
        Tensor logits = random_tensor({b, k}, rng, 3.0);
        std::vector<int> labels(b);
        for (int &l : labels) {
            l = static_cast<int>(rng.index(k));
        }
        const LossResult r = softmax_cross_entropy(logits, labels);
        EXPECT_GE(r.loss, 0.0);
        const Tensor unit({1}, 1.0);
        check_grad(logits, r.d_logits, unit,
                   [&] { return Tensor({1}, softmax_cross_entropy(logits, labels).loss); }, "cross entropy");
    }
}

TEST(Argmax, TiesGoLow) {
    const Tensor t({3, 3}, {1, 1, 0, 0, 2, 2, 5, 4, 5});
    EXPECT_EQ(argmax_rows(t), (std::vector<int>{0, 1, 0}));
}

TEST(Adam, Examples) {
    {
        std::vector<double> p{1.0, -2.0};
        const std::vector<double> g{0.0, 0.0};
        AdamState s(2, {});
        adam_step(p, g, s);
        EXPECT_EQ(p, (std::vector<double>{1.0, -2.0}));
        EXPECT_EQ(s.t, 1u);
    }
    {
        std::vector<double> p{0.0, 0.0};
        const std::vector<double> g{3.0, -0.01};
        AdamState s(2, {.lr = 0.1});
        adam_step(p, g, s);
        EXPECT_NEAR(p[0], -0.1, 1e-8);
        EXPECT_NEAR(p[1], 0.1, 1e-5);
    }
    {
        std::vector<double> p{1.0};
        const std::vector<double> g{1.0};
        AdamState s(1, {.lr = 0.1});
        adam_step(p, g, s);
        adam_step(p, g, s);
        EXPECT_NEAR(p[0], 0.8, 1e-7);
    }
    {
        std::vector<double> p{0.5, 0.25};
        const std::vector<double> g{1.0, -7.0};
        AdamState s(2, {.lr = 0.0});
        for (int i = 0; i < 5; ++i) {
            adam_step(p, g, s);
        }
        EXPECT_EQ(p, (std::vector<double>{0.5, 0.25}));
    }
    {
        std::vector<double> p(3);
        const std::vector<double> g(2);
        AdamState s(3, {});
        EXPECT_THROW(adam_step(p, g, s), SizeError);
    }
}

TEST(Layers, IdentityExamples) {
    Rng rng(3);
    const Tensor x = random_tensor({2, 3, 5}, rng);
    Tensor w({3, 3, 1});
    for (std::size_t c = 0; c < 3; ++c) {
        w.at(c, c, 0) = 1.0;
    }
    const Tensor y = conv1d_forward(x, w, Tensor({3}), 1, 0);
    EXPECT_EQ(y.shape(), x.shape());
    for (std::size_t i = 0; i < x.size(); ++i) {
        EXPECT_EQ(y[i], x[i]);
    }

    const Tensor d = random_tensor({4, 3}, rng);
    Tensor eye({3, 3});
    for (std::size_t i = 0; i < 3; ++i) {
        eye.at(i, i) = 1.0;
    }
    const Tensor dy = dense_forward(d, eye, Tensor({3}));
    for (std::size_t i = 0; i < d.size(); ++i) {
        EXPECT_EQ(dy[i], d[i]);
    }
    EXPECT_THROW((void)dense_forward(d, Tensor({3, 4}), Tensor({3})), SizeError);
}

TEST(Layers, ConvShapesAndPadding) {
    EXPECT_EQ(conv_output_length(10, 3, 1, 1), 10u);
    EXPECT_EQ(conv_output_length(10, 4, 2, 0), 4u);
    const Tensor x({1, 1, 3}, {1.0, 2.0, 3.0});
    const Tensor w({1, 1, 3}, {1.0, 1.0, 1.0});
    const Tensor y = conv1d_forward(x, w, Tensor({1}, 0.5), 1, 1);
    EXPECT_EQ(y.storage(), (std::vector<double>{3.5, 6.5, 5.5}));
    const Tensor pooled = avgpool_forward(Tensor({1, 1, 5}, {1, 3, 5, 7, 100}), 2);
    EXPECT_EQ(pooled.storage(), (std::vector<double>{2.0, 6.0}));
    const Tensor e = elu_forward(Tensor({1, 2}, {-1.0, 2.0}));
    EXPECT_NEAR(e[0], std::exp(-1.0) - 1.0, 1e-15);
    EXPECT_EQ(e[1], 2.0);
}

TEST(LayerGradients, Dense) {
    Rng rng(10);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t b = 1 + rng.index(4), in = 1 + rng.index(6), out = 1 + rng.index(5);
        Tensor x = random_tensor({b, in}, rng);
        Tensor w = random_tensor({out, in}, rng);
        Tensor bias = random_tensor({out}, rng);
        const Tensor dy = random_tensor({b, out}, rng);
        const LayerGrads g = dense_backward(x, w, dy);
        const auto f = [&] { return dense_forward(x, w, bias); };
        check_grad(x, g.dx, dy, f, "dense dx");
        check_grad(w, g.dw, dy, f, "dense dw");
        check_grad(bias, g.db, dy, f, "dense db");
    }
}

TEST(LayerGradients, Conv1D) {
    Rng rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t b = 1 + rng.index(3), cin = 1 + rng.index(3), cout = 1 + rng.index(3);
        const std::size_t k = 1 + rng.index(4), stride = 1 + rng.index(2), pad = rng.index(k);
        const std::size_t len = k + rng.index(6);
        Tensor x = random_tensor({b, cin, len}, rng);
        Tensor w = random_tensor({cout, cin, k}, rng);
        Tensor bias = random_tensor({cout}, rng);
        const auto f = [&] { return conv1d_forward(x, w, bias, stride, pad); };
        const Tensor dy = random_tensor(f().shape(), rng);
        const LayerGrads g = conv1d_backward(x, w, dy, stride, pad);
        check_grad(x, g.dx, dy, f, "conv dx");
        check_grad(w, g.dw, dy, f, "conv dw");
        check_grad(bias, g.db, dy, f, "conv db");
    }
}

TEST(LayerGradients, Depthwise) {
    Rng rng(12);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t b = 1 + rng.index(3), c = 1 + rng.index(4), k = 1 + rng.index(4);
        const std::size_t pad = rng.index(k), len = k + rng.index(6);
        Tensor x = random_tensor({b, c, len}, rng);
        Tensor w = random_tensor({c, k}, rng);
        Tensor bias = random_tensor({c}, rng);
        const auto f = [&] { return depthwise_forward(x, w, bias, pad); };
        const Tensor dy = random_tensor(f().shape(), rng);
        const LayerGrads g = depthwise_backward(x, w, dy, pad);
        check_grad(x, g.dx, dy, f, "depthwise dx");
        check_grad(w, g.dw, dy, f, "depthwise dw");
        check_grad(bias, g.db, dy, f, "depthwise db");
    }
}

TEST(LayerGradients, BatchNormTraining) {
    Rng rng(13);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t b = 2 + rng.index(5), c = 1 + rng.index(4);
        const bool spatial = rng.index(2) == 1;
        const std::vector<std::size_t> shape =
            spatial ? std::vector<std::size_t>{b, c, 1 + rng.index(4)} : std::vector<std::size_t>{b, c};
        Tensor x = random_tensor(shape, rng, 2.0);
        Tensor gamma = random_tensor({c}, rng);
        Tensor beta = random_tensor({c}, rng);
        const Tensor rm({c});
        const Tensor rv({c}, 1.0);
        const auto f = [&] { return batchnorm_forward(x, gamma, beta, rm, rv, true).y; };
        const Tensor dy = random_tensor(shape, rng);
        const LayerGrads g = batchnorm_backward(dy, gamma, batchnorm_forward(x, gamma, beta, rm, rv, true));
        check_grad(x, g.dx, dy, f, "bn dx");
        check_grad(gamma, g.dw, dy, f, "bn dgamma");
        check_grad(beta, g.db, dy, f, "bn dbeta");
    }
}

TEST(LayerGradients, BatchNormEval) {
    Rng rng(14);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t b = 1 + rng.index(4), c = 1 + rng.index(4);
        Tensor x = random_tensor({b, c}, rng);
        Tensor gamma = random_tensor({c}, rng);
        Tensor beta = random_tensor({c}, rng);
        const Tensor rm = random_tensor({c}, rng);
        const Tensor rv({c}, 0.5);
        const auto f = [&] { return batchnorm_forward(x, gamma, beta, rm, rv, false).y; };
        const Tensor dy = random_tensor({b, c}, rng);
        const LayerGrads g = batchnorm_backward(dy, gamma, batchnorm_forward(x, gamma, beta, rm, rv, false));
        check_grad(x, g.dx, dy, f, "bn eval dx");
        check_grad(gamma, g.dw, dy, f, "bn eval dgamma");
    }
}

TEST(LayerGradients, PoolAndElu) {
    Rng rng(15);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t b = 1 + rng.index(3), c = 1 + rng.index(3), width = 1 + rng.index(3);
        const std::size_t len = width + rng.index(7);
        Tensor x = random_tensor({b, c, len}, rng);
        const auto pool = [&] { return avgpool_forward(x, width); };
        const Tensor dyp = random_tensor(pool().shape(), rng);
        check_grad(x, avgpool_backward(dyp, x.shape(), width), dyp, pool, "avgpool");

        const auto elu = [&] { return elu_forward(x); };
        const Tensor dye = random_tensor(x.shape(), rng);
        check_grad(x, elu_backward(x, dye), dye, elu, "elu");
    }
}

TEST(Network, StackGradients) {
    Rng rng(16);
    const std::vector<LayerSpec> specs{Conv1DSpec{3, 4, 3, 1, 1}, BatchNormSpec{4}, DepthwiseConvSpec{4, 3, 1},
                                       EluSpec{},                 AvgPoolSpec{2},   FlattenSpec{},
                                       DenseSpec{12, 3, false}};
    std::vector<LayerParams> params;
    for (const LayerSpec &s : specs) {
        params.push_back(init_layer(s, rng));
    }
    Tensor x = random_tensor({5, 3, 6}, rng);
    const auto f = [&] { return net_forward(specs, params, x, true).output; };
    const Tensor y = f();
    ASSERT_EQ(y.shape(), (std::vector<std::size_t>{5, 3}));
    const Tensor dy = random_tensor(y.shape(), rng);
    const NetGrads g = net_backward(specs, params, net_forward(specs, params, x, true), dy);
    check_grad(x, g.dx, dy, f, "net dx");
    for (std::size_t l = 0; l < specs.size(); ++l) {
        for (std::size_t t = 0; t < params[l].trainable.size(); ++t) {
            check_grad(params[l].trainable[t], g.layers[l][t], dy, f, layer_name(specs[l]).c_str());
        }
    }
}

TEST(Network, ShapeValidation) {
    EXPECT_THROW((void)layer_output_shape(DenseSpec{4, 2, false}, {5}), SizeError);
    EXPECT_THROW((void)layer_output_shape(Conv1DSpec{2, 3, 5, 1, 0}, {2, 4}), SizeError);
    EXPECT_EQ(layer_output_shape(Conv1DSpec{2, 3, 3, 1, 1}, {2, 7}), (std::vector<std::size_t>{3, 7}));
    EXPECT_EQ(layer_output_shape(FlattenSpec{}, {3, 7}), (std::vector<std::size_t>{21}));
}

} // namespace
