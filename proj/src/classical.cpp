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
#include "qhybrid/classical.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qhybrid/errors.hpp"

namespace qhybrid {

namespace {

/// (B, C, L) view of a rank-2 or rank-3 tensor; rank-2 has L = 1.
struct ChannelView {
    std::size_t batch;
    std::size_t channels;
    std::size_t length;
};

ChannelView channel_view(const Tensor &x) {
    if (x.rank() == 2) {
        return {x.dim(0), x.dim(1), 1};
    }
    if (x.rank() == 3) {
        return {x.dim(0), x.dim(1), x.dim(2)};
    }
    throw SizeError("expected a rank-2 or rank-3 tensor, got " + x.shape_string());
}

void require(bool ok, const std::string &what) {
    if (!ok) {
        throw SizeError(what);
    }
}

void require_rank3(const Tensor &x, const char *name) {
    require(x.rank() == 3, std::string(name) + " expects [B, C, L], got " + x.shape_string());
}

} // namespace

// ---------------------------------------------------------------------------
// batch norm

BatchNormForward batchnorm_forward(const Tensor &x, const Tensor &gamma, const Tensor &beta,
                                   const Tensor &running_mean, const Tensor &running_var, bool training) {
    const ChannelView v = channel_view(x);
    require(v.batch >= 1, "batch norm needs a non-empty batch");
    require(gamma.size() == v.channels && beta.size() == v.channels && running_mean.size() == v.channels &&
                running_var.size() == v.channels,
            "batch norm parameter size does not match channel count");

    BatchNormForward out;
    out.training = training;
    out.mean.assign(v.channels, 0.0);
    out.var.assign(v.channels, 0.0);
    out.inv_std.assign(v.channels, 0.0);
    const double count = static_cast<double>(v.batch * v.length);

    for (std::size_t c = 0; c < v.channels; ++c) {
        if (training) {
            double sum = 0.0;
            for (std::size_t b = 0; b < v.batch; ++b) {
                for (std::size_t l = 0; l < v.length; ++l) {
                    sum += x[(b * v.channels + c) * v.length + l];
                }
            }
            const double mean = sum / count;
            double sq = 0.0;
            for (std::size_t b = 0; b < v.batch; ++b) {
                for (std::size_t l = 0; l < v.length; ++l) {
                    const double d = x[(b * v.channels + c) * v.length + l] - mean;
                    sq += d * d;
                }
            }
            out.mean[c] = mean;
            out.var[c] = sq / count;
        } else {
            out.mean[c] = running_mean[c];
            out.var[c] = running_var[c];
        }
        out.inv_std[c] = 1.0 / std::sqrt(out.var[c] + kBatchNormEpsilon);
    }

    out.x_hat = Tensor(x.shape());
    out.y = Tensor(x.shape());
    for (std::size_t b = 0; b < v.batch; ++b) {
        for (std::size_t c = 0; c < v.channels; ++c) {
            for (std::size_t l = 0; l < v.length; ++l) {
                const std::size_t i = (b * v.channels + c) * v.length + l;
                const double xh = (x[i] - out.mean[c]) * out.inv_std[c];
                out.x_hat[i] = xh;
                out.y[i] = gamma[c] * xh + beta[c];
            }
        }
    }
    return out;
}

void update_running_stats(Tensor &running_mean, Tensor &running_var, const BatchNormForward &fwd,
                          std::size_t count_per_channel, double momentum) {
    const double n = static_cast<double>(count_per_channel);
    const double unbias = count_per_channel > 1 ? n / (n - 1.0) : 1.0;
    for (std::size_t c = 0; c < fwd.mean.size(); ++c) {
        running_mean[c] = (1.0 - momentum) * running_mean[c] + momentum * fwd.mean[c];
        running_var[c] = (1.0 - momentum) * running_var[c] + momentum * fwd.var[c] * unbias;
    }
}

LayerGrads batchnorm_backward(const Tensor &dy, const Tensor &gamma, const BatchNormForward &fwd) {
    const ChannelView v = channel_view(dy);
    require(dy.shape() == fwd.x_hat.shape(), "batch norm gradient shape mismatch");
    LayerGrads g{Tensor(dy.shape()), Tensor({v.channels}), Tensor({v.channels})};
    const double count = static_cast<double>(v.batch * v.length);

    for (std::size_t c = 0; c < v.channels; ++c) {
        double sum_dy = 0.0;
        double sum_dy_xhat = 0.0;
        for (std::size_t b = 0; b < v.batch; ++b) {
            for (std::size_t l = 0; l < v.length; ++l) {
                const std::size_t i = (b * v.channels + c) * v.length + l;
                sum_dy += dy[i];
                sum_dy_xhat += dy[i] * fwd.x_hat[i];
            }
        }
        g.dw[c] = sum_dy_xhat;
        g.db[c] = sum_dy;
        const double scale = gamma[c] * fwd.inv_std[c];
        for (std::size_t b = 0; b < v.batch; ++b) {
            for (std::size_t l = 0; l < v.length; ++l) {
                const std::size_t i = (b * v.channels + c) * v.length + l;
                if (fwd.training) {
                    g.dx[i] = scale * (dy[i] - sum_dy / count - fwd.x_hat[i] * sum_dy_xhat / count);
                } else {
                    g.dx[i] = scale * dy[i];
                }
            }
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// convolutions

std::size_t conv_output_length(std::size_t length, std::size_t kernel, std::size_t stride, std::size_t padding) {
    require(kernel >= 1 && stride >= 1, "kernel and stride must be positive");
    require(kernel <= length + 2 * padding, "kernel " + std::to_string(kernel) + " longer than padded input " +
                                                std::to_string(length + 2 * padding));
    return (length + 2 * padding - kernel) / stride + 1;
}

Tensor conv1d_forward(const Tensor &x, const Tensor &w, const Tensor &b, std::size_t stride, std::size_t padding) {
    require_rank3(x, "conv1d");
    require(w.rank() == 3 && w.dim(1) == x.dim(1), "conv1d weight " + w.shape_string() +
                                                       " incompatible with input " + x.shape_string());
    const std::size_t batch = x.dim(0), cin = x.dim(1), len = x.dim(2);
    const std::size_t cout = w.dim(0), k = w.dim(2);
    require(b.size() == cout, "conv1d bias size mismatch");
    const std::size_t lout = conv_output_length(len, k, stride, padding);

    Tensor y({batch, cout, lout});
#pragma omp parallel for schedule(static) if (batch > 1)
    for (std::ptrdiff_t bi = 0; bi < static_cast<std::ptrdiff_t>(batch); ++bi) {
        const auto n = static_cast<std::size_t>(bi);
        for (std::size_t o = 0; o < cout; ++o) {
            for (std::size_t t = 0; t < lout; ++t) {
                double acc = b[o];
                for (std::size_t c = 0; c < cin; ++c) {
                    for (std::size_t j = 0; j < k; ++j) {
                        const std::ptrdiff_t pos = static_cast<std::ptrdiff_t>(t * stride + j) -
                                                   static_cast<std::ptrdiff_t>(padding);
                        if (pos >= 0 && pos < static_cast<std::ptrdiff_t>(len)) {
                            acc += w.at(o, c, j) * x.at(n, c, static_cast<std::size_t>(pos));
                        }
                    }
                }
                y.at(n, o, t) = acc;
            }
        }
    }
    return y;
}

LayerGrads conv1d_backward(const Tensor &x, const Tensor &w, const Tensor &dy, std::size_t stride,
                           std::size_t padding) {
    require_rank3(x, "conv1d");
    require_rank3(dy, "conv1d gradient");
    const std::size_t batch = x.dim(0), cin = x.dim(1), len = x.dim(2);
    const std::size_t cout = w.dim(0), k = w.dim(2);
    const std::size_t lout = dy.dim(2);
    require(dy.dim(0) == batch && dy.dim(1) == cout && lout == conv_output_length(len, k, stride, padding),
            "conv1d gradient shape mismatch");

    LayerGrads g{Tensor(x.shape()), Tensor(w.shape()), Tensor({cout})};
    const auto in_range = [&](std::size_t t, std::size_t j, std::size_t &pos) {
        const std::ptrdiff_t p =
            static_cast<std::ptrdiff_t>(t * stride + j) - static_cast<std::ptrdiff_t>(padding);
        pos = static_cast<std::size_t>(p);
        return p >= 0 && p < static_cast<std::ptrdiff_t>(len);
    };

    // dx: each sample independent
#pragma omp parallel for schedule(static) if (batch > 1)
    for (std::ptrdiff_t bi = 0; bi < static_cast<std::ptrdiff_t>(batch); ++bi) {
        const auto n = static_cast<std::size_t>(bi);
        for (std::size_t o = 0; o < cout; ++o) {
            for (std::size_t t = 0; t < lout; ++t) {
                const double d = dy.at(n, o, t);
                for (std::size_t c = 0; c < cin; ++c) {
                    for (std::size_t j = 0; j < k; ++j) {
                        std::size_t pos = 0;
                        if (in_range(t, j, pos)) {
                            g.dx.at(n, c, pos) += w.at(o, c, j) * d;
                        }
                    }
                }
            }
        }
    }
    // dw, db: each output channel owned by one thread, batch summed in order
#pragma omp parallel for schedule(static) if (cout > 1)
    for (std::ptrdiff_t oi = 0; oi < static_cast<std::ptrdiff_t>(cout); ++oi) {
        const auto o = static_cast<std::size_t>(oi);
        for (std::size_t n = 0; n < batch; ++n) {
            for (std::size_t t = 0; t < lout; ++t) {
                const double d = dy.at(n, o, t);
                g.db[o] += d;
                for (std::size_t c = 0; c < cin; ++c) {
                    for (std::size_t j = 0; j < k; ++j) {
                        std::size_t pos = 0;
                        if (in_range(t, j, pos)) {
                            g.dw.at(o, c, j) += x.at(n, c, pos) * d;
                        }
                    }
                }
            }
        }
    }
    return g;
}

Tensor depthwise_forward(const Tensor &x, const Tensor &w, const Tensor &b, std::size_t padding) {
    require_rank3(x, "depthwise conv");
    const std::size_t batch = x.dim(0), ch = x.dim(1), len = x.dim(2);
    require(w.rank() == 2 && w.dim(0) == ch && b.size() == ch, "depthwise weight shape mismatch");
    const std::size_t k = w.dim(1);
    const std::size_t lout = conv_output_length(len, k, 1, padding);

    Tensor y({batch, ch, lout});
    for (std::size_t n = 0; n < batch; ++n) {
        for (std::size_t c = 0; c < ch; ++c) {
            for (std::size_t t = 0; t < lout; ++t) {
                double acc = b[c];
                for (std::size_t j = 0; j < k; ++j) {
                    const std::ptrdiff_t pos =
                        static_cast<std::ptrdiff_t>(t + j) - static_cast<std::ptrdiff_t>(padding);
                    if (pos >= 0 && pos < static_cast<std::ptrdiff_t>(len)) {
                        acc += w.at(c, j) * x.at(n, c, static_cast<std::size_t>(pos));
                    }
                }
                y.at(n, c, t) = acc;
            }
        }
    }
    return y;
}

LayerGrads depthwise_backward(const Tensor &x, const Tensor &w, const Tensor &dy, std::size_t padding) {
    require_rank3(x, "depthwise conv");
    require_rank3(dy, "depthwise gradient");
    const std::size_t batch = x.dim(0), ch = x.dim(1), len = x.dim(2);
    const std::size_t k = w.dim(1);
    const std::size_t lout = dy.dim(2);
    require(dy.dim(0) == batch && dy.dim(1) == ch && lout == conv_output_length(len, k, 1, padding),
            "depthwise gradient shape mismatch");

    LayerGrads g{Tensor(x.shape()), Tensor(w.shape()), Tensor({ch})};
    for (std::size_t n = 0; n < batch; ++n) {
        for (std::size_t c = 0; c < ch; ++c) {
            for (std::size_t t = 0; t < lout; ++t) {
                const double d = dy.at(n, c, t);
                g.db[c] += d;
                for (std::size_t j = 0; j < k; ++j) {
                    const std::ptrdiff_t pos =
                        static_cast<std::ptrdiff_t>(t + j) - static_cast<std::ptrdiff_t>(padding);
                    if (pos >= 0 && pos < static_cast<std::ptrdiff_t>(len)) {
                        const auto p = static_cast<std::size_t>(pos);
                        g.dw.at(c, j) += x.at(n, c, p) * d;
                        g.dx.at(n, c, p) += w.at(c, j) * d;
                    }
                }
            }
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// pooling, dense, activations

Tensor avgpool_forward(const Tensor &x, std::size_t width) {
    require_rank3(x, "avgpool");
    require(width >= 1 && width <= x.dim(2), "pool width " + std::to_string(width) + " invalid for length " +
                                                 std::to_string(x.dim(2)));
    const std::size_t batch = x.dim(0), ch = x.dim(1), lout = x.dim(2) / width;
    Tensor y({batch, ch, lout});
    const double inv = 1.0 / static_cast<double>(width);
    for (std::size_t n = 0; n < batch; ++n) {
        for (std::size_t c = 0; c < ch; ++c) {
            for (std::size_t t = 0; t < lout; ++t) {
                double acc = 0.0;
                for (std::size_t j = 0; j < width; ++j) {
                    acc += x.at(n, c, t * width + j);
                }
                y.at(n, c, t) = acc * inv;
            }
        }
    }
    return y;
}

Tensor avgpool_backward(const Tensor &dy, const std::vector<std::size_t> &input_shape, std::size_t width) {
    require_rank3(dy, "avgpool gradient");
    Tensor dx(input_shape);
    const double inv = 1.0 / static_cast<double>(width);
    for (std::size_t n = 0; n < dy.dim(0); ++n) {
        for (std::size_t c = 0; c < dy.dim(1); ++c) {
            for (std::size_t t = 0; t < dy.dim(2); ++t) {
                for (std::size_t j = 0; j < width; ++j) {
                    dx.at(n, c, t * width + j) = dy.at(n, c, t) * inv;
                }
            }
        }
    }
    return dx;
}

Tensor dense_forward(const Tensor &x, const Tensor &w, const Tensor &b) {
    require(x.rank() == 2 && w.rank() == 2 && w.dim(1) == x.dim(1) && b.size() == w.dim(0),
            "dense shapes incompatible: x " + x.shape_string() + ", w " + w.shape_string());
    const std::size_t batch = x.dim(0), in = x.dim(1), out = w.dim(0);
    Tensor y({batch, out});
    for (std::size_t n = 0; n < batch; ++n) {
        for (std::size_t o = 0; o < out; ++o) {
            double acc = b[o];
            for (std::size_t i = 0; i < in; ++i) {
                acc += w.at(o, i) * x.at(n, i);
            }
            y.at(n, o) = acc;
        }
    }
    return y;
}

LayerGrads dense_backward(const Tensor &x, const Tensor &w, const Tensor &dy) {
    require(dy.rank() == 2 && dy.dim(0) == x.dim(0) && dy.dim(1) == w.dim(0), "dense gradient shape mismatch");
    const std::size_t batch = x.dim(0), in = x.dim(1), out = w.dim(0);
    LayerGrads g{Tensor(x.shape()), Tensor(w.shape()), Tensor({out})};
    for (std::size_t n = 0; n < batch; ++n) {
        for (std::size_t o = 0; o < out; ++o) {
            const double d = dy.at(n, o);
            g.db[o] += d;
            for (std::size_t i = 0; i < in; ++i) {
                g.dw.at(o, i) += d * x.at(n, i);
                g.dx.at(n, i) += d * w.at(o, i);
            }
        }
    }
    return g;
}

Tensor elu_forward(const Tensor &x, double alpha) {
    Tensor y(x.shape());
    for (std::size_t i = 0; i < x.size(); ++i) {
        y[i] = x[i] > 0.0 ? x[i] : alpha * std::expm1(x[i]);
    }
    return y;
}

Tensor elu_backward(const Tensor &x, const Tensor &dy, double alpha) {
    require(x.shape() == dy.shape(), "elu gradient shape mismatch");
    Tensor dx(x.shape());
    for (std::size_t i = 0; i < x.size(); ++i) {
        dx[i] = x[i] > 0.0 ? dy[i] : dy[i] * alpha * std::exp(x[i]);
    }
    return dx;
}

// ---------------------------------------------------------------------------
// loss

Tensor softmax(const Tensor &logits) {
    require(logits.rank() == 2, "softmax expects [B, K]");
    Tensor p(logits.shape());
    for (std::size_t n = 0; n < logits.dim(0); ++n) {
        const auto row = logits.row(n);
        const double mx = *std::max_element(row.begin(), row.end());
        double z = 0.0;
        for (std::size_t k = 0; k < row.size(); ++k) {
            p.at(n, k) = std::exp(row[k] - mx);
            z += p.at(n, k);
        }
        for (std::size_t k = 0; k < row.size(); ++k) {
            p.at(n, k) /= z;
        }
    }
    return p;
}

LossResult softmax_cross_entropy(const Tensor &logits, std::span<const int> labels) {
    require(logits.rank() == 2 && logits.dim(0) >= 1, "loss expects non-empty [B, K] logits");
    const std::size_t batch = logits.dim(0), classes = logits.dim(1);
    require(labels.size() == batch, "label count does not match batch");
    for (const int y : labels) {
        if (y < 0 || static_cast<std::size_t>(y) >= classes) {
            throw LabelError("label " + std::to_string(y) + " outside [0, " + std::to_string(classes) + ")");
        }
    }
    LossResult out;
    out.d_logits = softmax(logits);
    const double inv_b = 1.0 / static_cast<double>(batch);
    for (std::size_t n = 0; n < batch; ++n) {
        const auto row = logits.row(n);
        const double mx = *std::max_element(row.begin(), row.end());
        double z = 0.0;
        for (const double v : row) {
            z += std::exp(v - mx);
        }
        const auto y = static_cast<std::size_t>(labels[n]);
        out.loss += (mx + std::log(z) - row[y]) * inv_b;
        out.d_logits.at(n, y) -= 1.0;
    }
    for (double &d : out.d_logits.data()) {
        d *= inv_b;
    }
    return out;
}

std::vector<int> argmax_rows(const Tensor &logits) {
    std::vector<int> out(logits.dim(0));
    for (std::size_t n = 0; n < logits.dim(0); ++n) {
        const auto row = logits.row(n);
        // max_element returns the first maximum
        out[n] = static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Adam

void adam_step(std::span<double> params, std::span<const double> grads, AdamState &state) {
    if (params.size() != grads.size() || state.m.size() != params.size() || state.v.size() != params.size()) {
        throw SizeError("adam: parameter, gradient and state lengths differ");
    }
    const AdamOptions &o = state.options;
    ++state.t;
    const double c1 = 1.0 - std::pow(o.beta1, static_cast<double>(state.t));
    const double c2 = 1.0 - std::pow(o.beta2, static_cast<double>(state.t));
    for (std::size_t i = 0; i < params.size(); ++i) {
        state.m[i] = o.beta1 * state.m[i] + (1.0 - o.beta1) * grads[i];
        state.v[i] = o.beta2 * state.v[i] + (1.0 - o.beta2) * grads[i] * grads[i];
        const double m_hat = state.m[i] / c1;
        const double v_hat = state.v[i] / c2;
        params[i] -= o.lr * m_hat / (std::sqrt(v_hat) + o.eps);
    }
}

} // namespace qhybrid
