#include "ovid/attention.hpp"

#include <cmath>
#include <string>

#include "ovid/error.hpp"
#include "ovid/nn_layers.hpp"

namespace ovid {

AttentionParams AttentionParams::zeros(std::size_t model_dim, std::size_t heads) {
    if (heads == 0 || model_dim % heads != 0) {
        throw ShapeMismatch("attention: " + std::to_string(heads) + " heads do not divide model dim " +
                            std::to_string(model_dim));
    }
    const std::size_t head_dim = model_dim / heads;
    AttentionParams p;
    p.query.assign(heads, Matrix(model_dim, head_dim));
    p.key.assign(heads, Matrix(model_dim, head_dim));
    p.value.assign(heads, Matrix(model_dim, head_dim));
    p.output = Matrix(heads * head_dim, model_dim);
    return p;
}

AttentionParams AttentionParams::init(std::size_t model_dim, std::size_t heads, Rng& rng) {
    AttentionParams p = zeros(model_dim, heads);
    for (std::size_t h = 0; h < heads; ++h) {
        xavier_uniform(p.query[h], rng);
        xavier_uniform(p.key[h], rng);
        xavier_uniform(p.value[h], rng);
    }
    xavier_uniform(p.output, rng);
    return p;
}

Matrix multi_head_attention(const Matrix& query, const Matrix& keys, const Matrix& values,
                            const AttentionParams& params, AttentionCache* cache) {
    if (keys.rows() == 0) {
        throw EmptyKeySet("multi_head_attention needs at least one key");
    }
    if (query.rows() != 1 || keys.rows() != values.rows() || query.cols() != keys.cols() ||
        keys.cols() != values.cols() || params.heads() == 0 || query.cols() != params.query.front().rows()) {
        throw ShapeMismatch("multi_head_attention: inconsistent query/key/value shapes");
    }
    const std::size_t heads = params.heads();
    const std::size_t head_dim = params.head_dim();
    const double scale = 1.0 / std::sqrt(static_cast<double>(head_dim));

    AttentionCache local;
    AttentionCache& c = cache != nullptr ? *cache : local;
    c.q.resize(heads);
    c.k.resize(heads);
    c.v.resize(heads);
    c.weights.resize(heads);
    c.concat = Matrix(1, heads * head_dim);

    for (std::size_t h = 0; h < heads; ++h) {
        c.q[h] = matmul(query, params.query[h]);
        c.k[h] = matmul(keys, params.key[h]);
        c.v[h] = matmul(values, params.value[h]);
        Matrix logits = matmul_nt(c.q[h], c.k[h]);
        logits *= scale;
        c.weights[h] = softmax(logits.row(0));
        for (std::size_t i = 0; i < keys.rows(); ++i) {
            const double w = c.weights[h][i];
            for (std::size_t d = 0; d < head_dim; ++d) {
                c.concat(0, h * head_dim + d) += w * c.v[h](i, d);
            }
        }
    }
    Matrix out = matmul(c.concat, params.output);
    debug_check_finite(out, "multi_head_attention");
    if (cache != nullptr) {
        c.query_in = query;
        c.keys_in = keys;
        c.values_in = values;
        c.recorded = true;
    }
    return out;
}

AttentionInputGrads multi_head_attention_backward(const AttentionCache& cache, const Matrix& grad_out,
                                                  const AttentionParams& params, AttentionParams& grads) {
    if (!cache.recorded) {
        throw NoForwardRecorded("multi_head_attention_backward called without a recorded forward pass");
    }
    const std::size_t heads = params.heads();
    const std::size_t head_dim = params.head_dim();
    const std::size_t n = cache.keys_in.rows();
    const double scale = 1.0 / std::sqrt(static_cast<double>(head_dim));

    grads.output += matmul_tn(cache.concat, grad_out);
    const Matrix grad_concat = matmul_nt(grad_out, params.output);

    AttentionInputGrads in{Matrix(1, cache.query_in.cols()), Matrix(n, cache.keys_in.cols()),
                           Matrix(n, cache.values_in.cols())};
    for (std::size_t h = 0; h < heads; ++h) {
        const Matrix grad_head = slice_cols(grad_concat, h * head_dim, head_dim);
        const std::vector<double>& alpha = cache.weights[h];

        // head = alpha · Vh
        const Matrix grad_alpha = matmul_nt(grad_head, cache.v[h]); // 1 x n
        Matrix grad_vh(n, head_dim);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t d = 0; d < head_dim; ++d) {
                grad_vh(i, d) = alpha[i] * grad_head(0, d);
            }
        }

        Matrix grad_logits = Matrix::row_vector(softmax_backward(alpha, grad_alpha.row(0)));
        grad_logits *= scale;
        const Matrix grad_qh = matmul(grad_logits, cache.k[h]);     // 1 x d_k
        const Matrix grad_kh = matmul_tn(grad_logits, cache.q[h]);  // n x d_k

        grads.query[h] += matmul_tn(cache.query_in, grad_qh);
        grads.key[h] += matmul_tn(cache.keys_in, grad_kh);
        grads.value[h] += matmul_tn(cache.values_in, grad_vh);

        in.query += matmul_nt(grad_qh, params.query[h]);
        in.keys += matmul_nt(grad_kh, params.key[h]);
        in.values += matmul_nt(grad_vh, params.value[h]);
    }
    return in;
}

} // namespace ovid
