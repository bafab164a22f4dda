#pragma once

#include <string>
#include <vector>

#include "ovid/matrix.hpp"
#include "ovid/rng.hpp"

namespace ovid {

/// Per-head projections (model_dim x head_dim) and the output projection
/// (heads * head_dim x model_dim). No biases.
struct AttentionParams {
    std::vector<Matrix> query;
    std::vector<Matrix> key;
    std::vector<Matrix> value;
    Matrix output;

    std::size_t heads() const noexcept { return query.size(); }
    std::size_t head_dim() const noexcept { return query.empty() ? 0 : query.front().cols(); }
    std::size_t model_dim() const noexcept { return output.cols(); }

    /// Xavier-uniform projections; requires heads | model_dim.
    static AttentionParams init(std::size_t model_dim, std::size_t heads, Rng& rng);
    static AttentionParams zeros(std::size_t model_dim, std::size_t heads);

    template <typename Self, typename Fn>
    static void visit(Self& self, const std::string& prefix, Fn&& fn) {
        for (std::size_t h = 0; h < self.query.size(); ++h) {
            const std::string head = prefix + ".head" + std::to_string(h);
            fn(head + ".query", self.query[h]);
            fn(head + ".key", self.key[h]);
            fn(head + ".value", self.value[h]);
        }
        fn(prefix + ".output", self.output);
    }
};

struct AttentionCache {
    Matrix query_in;
    Matrix keys_in;
    Matrix values_in;
    std::vector<Matrix> q;  // 1 x head_dim
    std::vector<Matrix> k;  // n x head_dim
    std::vector<Matrix> v;  // n x head_dim
    std::vector<std::vector<double>> weights; // per head, length n
    Matrix concat;          // 1 x heads * head_dim
    bool recorded = false;
};

/// Scaled dot-product attention of a single query row over n keys/values:
/// head_i = softmax(q Wq_i (K Wk_i)ᵀ / sqrt(d_k)) (V Wv_i),
/// output = [head_1, ..., head_h] Wo. Throws EmptyKeySet when n = 0.
Matrix multi_head_attention(const Matrix& query, const Matrix& keys, const Matrix& values,
                            const AttentionParams& params, AttentionCache* cache = nullptr);

struct AttentionInputGrads {
    Matrix query;
    Matrix keys;
    Matrix values;
};

AttentionInputGrads multi_head_attention_backward(const AttentionCache& cache, const Matrix& grad_out,
                                                  const AttentionParams& params, AttentionParams& grads);

} // namespace ovid
