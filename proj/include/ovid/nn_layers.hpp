#pragma once

#include <span>
#include <string>
#include <vector>

#include "ovid/matrix.hpp"
#include "ovid/rng.hpp"

namespace ovid {

enum class Activation { None, ReLU, Sigmoid };

/// y = act(x W + b), W is in x out, b is 1 x out.
struct DenseParams {
    Matrix weight;
    Matrix bias;

    static DenseParams xavier(std::size_t in, std::size_t out, Rng& rng);
    static DenseParams zeros(std::size_t in, std::size_t out);

    template <typename Self, typename Fn>
    static void visit(Self& self, const std::string& prefix, Fn&& fn) {
        fn(prefix + ".weight", self.weight);
        fn(prefix + ".bias", self.bias);
    }
};

/// Layer normalization gain (γ) and shift (β), each 1 x dim.
struct NormParams {
    Matrix gain;
    Matrix shift;

    static NormParams identity(std::size_t dim);
    static NormParams zeros(std::size_t dim);

    template <typename Self, typename Fn>
    static void visit(Self& self, const std::string& prefix, Fn&& fn) {
        fn(prefix + ".gain", self.gain);
        fn(prefix + ".shift", self.shift);
    }
};

/// A fully connected layer followed by layer normalization.
struct LayerParams {
    DenseParams dense;
    NormParams norm;

    static LayerParams init(std::size_t in, std::size_t out, Rng& rng);
    static LayerParams zeros(std::size_t in, std::size_t out);

    template <typename Self, typename Fn>
    static void visit(Self& self, const std::string& prefix, Fn&& fn) {
        DenseParams::visit(self.dense, prefix + ".fc", fn);
        NormParams::visit(self.norm, prefix + ".norm", fn);
    }
};

/// Fills with U(-a, a), a = sqrt(6 / (fan_in + fan_out)).
void xavier_uniform(Matrix& m, Rng& rng);

double sigmoid(double x) noexcept;

struct DenseCache {
    Matrix input;
    Matrix output; // after activation
    Activation activation = Activation::None;
    bool recorded = false;
};

Matrix fc_forward(const Matrix& x, const DenseParams& params, Activation activation, DenseCache* cache = nullptr);

/// Accumulates into `grads` and returns dL/dx. Throws NoForwardRecorded.
Matrix fc_backward(const DenseCache& cache, const Matrix& grad_out, const DenseParams& params, DenseParams& grads);

inline constexpr double layer_norm_epsilon = 1e-5;

struct NormCache {
    Matrix normalized;
    std::vector<double> inv_std;
    bool recorded = false;
};

/// Per-row standardization with the biased variance, then γ ⊙ x̂ + β.
Matrix layer_norm(const Matrix& x, const NormParams& params, double epsilon = layer_norm_epsilon,
                  NormCache* cache = nullptr);

Matrix layer_norm_backward(const NormCache& cache, const Matrix& grad_out, const NormParams& params,
                           NormParams& grads);

/// Max-subtracted softmax.
std::vector<double> softmax(std::span<const double> logits);

/// Given softmax output p and dL/dp, returns dL/dlogits.
std::vector<double> softmax_backward(std::span<const double> probs, std::span<const double> grad_probs);

} // namespace ovid
