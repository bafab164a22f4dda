#include "ovid/nn_layers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ovid/error.hpp"

namespace ovid {

void xavier_uniform(Matrix& m, Rng& rng) {
    const double bound = std::sqrt(6.0 / static_cast<double>(m.rows() + m.cols()));
    for (double& v : m.data()) {
        v = rng.uniform(-bound, bound);
    }
}

DenseParams DenseParams::xavier(std::size_t in, std::size_t out, Rng& rng) {
    DenseParams p = zeros(in, out);
    xavier_uniform(p.weight, rng);
    return p;
}

DenseParams DenseParams::zeros(std::size_t in, std::size_t out) { return DenseParams{Matrix(in, out), Matrix(1, out)}; }

NormParams NormParams::identity(std::size_t dim) { return NormParams{Matrix(1, dim, 1.0), Matrix(1, dim)}; }

NormParams NormParams::zeros(std::size_t dim) { return NormParams{Matrix(1, dim), Matrix(1, dim)}; }

LayerParams LayerParams::init(std::size_t in, std::size_t out, Rng& rng) {
    return LayerParams{DenseParams::xavier(in, out, rng), NormParams::identity(out)};
}

LayerParams LayerParams::zeros(std::size_t in, std::size_t out) {
    return LayerParams{DenseParams::zeros(in, out), NormParams::zeros(out)};
}

double sigmoid(double x) noexcept {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

Matrix fc_forward(const Matrix& x, const DenseParams& params, Activation activation, DenseCache* cache) {
    if (x.cols() != params.weight.rows() || params.bias.rows() != 1 || params.bias.cols() != params.weight.cols()) {
        throw ShapeMismatch("fc_forward: input " + std::to_string(x.rows()) + "x" + std::to_string(x.cols()) +
                            " against weight " + std::to_string(params.weight.rows()) + "x" +
                            std::to_string(params.weight.cols()));
    }
    Matrix y = matmul(x, params.weight);
    for (std::size_t r = 0; r < y.rows(); ++r) {
        auto row = y.row(r);
        for (std::size_t c = 0; c < y.cols(); ++c) {
            double v = row[c] + params.bias(0, c);
            switch (activation) {
            case Activation::None:
                break;
            case Activation::ReLU:
                v = std::max(0.0, v);
                break;
            case Activation::Sigmoid:
                v = sigmoid(v);
                break;
            }
            row[c] = v;
        }
    }
    debug_check_finite(y, "fc_forward");
    if (cache != nullptr) {
        cache->input = x;
        cache->output = y;
        cache->activation = activation;
        cache->recorded = true;
    }
    return y;
}

Matrix fc_backward(const DenseCache& cache, const Matrix& grad_out, const DenseParams& params, DenseParams& grads) {
    if (!cache.recorded) {
        throw NoForwardRecorded("fc_backward called without a recorded forward pass");
    }
    if (!grad_out.same_shape(cache.output)) {
        throw ShapeMismatch("fc_backward: upstream gradient shape differs from the layer output");
    }
    Matrix pre = grad_out;
    for (std::size_t i = 0; i < pre.size(); ++i) {
        const double y = cache.output.data()[i];
        switch (cache.activation) {
        case Activation::None:
            break;
        case Activation::ReLU:
            pre.data()[i] = y > 0.0 ? pre.data()[i] : 0.0;
            break;
        case Activation::Sigmoid:
            pre.data()[i] *= y * (1.0 - y);
            break;
        }
    }
    grads.weight += matmul_tn(cache.input, pre);
    for (std::size_t r = 0; r < pre.rows(); ++r) {
        for (std::size_t c = 0; c < pre.cols(); ++c) {
            grads.bias(0, c) += pre(r, c);
        }
    }
    return matmul_nt(pre, params.weight);
}

Matrix layer_norm(const Matrix& x, const NormParams& params, double epsilon, NormCache* cache) {
    if (x.empty()) {
        throw ShapeMismatch("layer_norm on an empty input");
    }
    if (params.gain.cols() != x.cols() || params.shift.cols() != x.cols()) {
        throw ShapeMismatch("layer_norm: " + std::to_string(x.cols()) + " features but parameters for " +
                            std::to_string(params.gain.cols()));
    }
    const auto n = static_cast<double>(x.cols());
    Matrix normalized(x.rows(), x.cols());
    Matrix y(x.rows(), x.cols());
    std::vector<double> inv_std(x.rows());
    for (std::size_t r = 0; r < x.rows(); ++r) {
        const auto row = x.row(r);
        const double mean = std::accumulate(row.begin(), row.end(), 0.0) / n;
        double var = 0.0;
        for (const double v : row) {
            var += (v - mean) * (v - mean);
        }
        var /= n;
        inv_std[r] = 1.0 / std::sqrt(var + epsilon);
        for (std::size_t c = 0; c < x.cols(); ++c) {
            normalized(r, c) = (row[c] - mean) * inv_std[r];
            y(r, c) = params.gain(0, c) * normalized(r, c) + params.shift(0, c);
        }
    }
    debug_check_finite(y, "layer_norm");
    if (cache != nullptr) {
        cache->normalized = std::move(normalized);
        cache->inv_std = std::move(inv_std);
        cache->recorded = true;
    }
    return y;
}

Matrix layer_norm_backward(const NormCache& cache, const Matrix& grad_out, const NormParams& params,
                           NormParams& grads) {
    if (!cache.recorded) {
        throw NoForwardRecorded("layer_norm_backward called without a recorded forward pass");
    }
    if (!grad_out.same_shape(cache.normalized)) {
        throw ShapeMismatch("layer_norm_backward: upstream gradient shape differs from the layer output");
    }
    const std::size_t cols = grad_out.cols();
    const auto n = static_cast<double>(cols);
    Matrix dx(grad_out.rows(), cols);
    std::vector<double> dxhat(cols);
    for (std::size_t r = 0; r < grad_out.rows(); ++r) {
        double sum = 0.0;
        double dot = 0.0;
        for (std::size_t c = 0; c < cols; ++c) {
            const double g = grad_out(r, c);
            const double xhat = cache.normalized(r, c);
            grads.gain(0, c) += g * xhat;
            grads.shift(0, c) += g;
            dxhat[c] = g * params.gain(0, c);
            sum += dxhat[c];
            dot += dxhat[c] * xhat;
        }
        for (std::size_t c = 0; c < cols; ++c) {
            dx(r, c) = cache.inv_std[r] / n * (n * dxhat[c] - sum - cache.normalized(r, c) * dot);
        }
    }
    return dx;
}

std::vector<double> softmax(std::span<const double> logits) {
    std::vector<double> out(logits.size());
    if (logits.empty()) {
        return out;
    }
    const double max = *std::max_element(logits.begin(), logits.end());
    double total = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        out[i] = std::exp(logits[i] - max);
        total += out[i];
    }
    for (double& v : out) {
        v /= total;
    }
    return out;
}

std::vector<double> softmax_backward(std::span<const double> probs, std::span<const double> grad_probs) {
    double dot = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        dot += probs[i] * grad_probs[i];
    }
    std::vector<double> out(probs.size());
    for (std::size_t i = 0; i < probs.size(); ++i) {
        out[i] = probs[i] * (grad_probs[i] - dot);
    }
    return out;
}

} // namespace ovid
