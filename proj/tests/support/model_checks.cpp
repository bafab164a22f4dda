#include "model_checks.hpp"

#include "ovid/attention.hpp"
#include "ovid/loss.hpp"
#include "ovid/nn_layers.hpp"
#include "ovid/ovid_model.hpp"
#include "ovid/rng.hpp"
#include "synthetic.hpp"

namespace ovid::testing {

namespace {

Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, double scale = 1.0) {
    Matrix m(rows, cols);
    for (double& v : m.data()) {
        v = rng.uniform(-scale, scale);
    }
    return m;
}

double weighted_sum(const Matrix& y, const Matrix& r) {
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        s += y.data()[i] * r.data()[i];
    }
    return s;
}

void check_fc(Rng& rng, Activation act, const std::string& name, GradReport& report) {
    const std::size_t rows = 1 + rng.uniform_index(4);
    const std::size_t in = 1 + rng.uniform_index(5);
    const std::size_t out = 1 + rng.uniform_index(5);
    DenseParams p = DenseParams::xavier(in, out, rng);
    p.bias = random_matrix(rng, 1, out, 0.5);
    Matrix x = random_matrix(rng, rows, in);
    const Matrix r = random_matrix(rng, rows, out);
    const auto loss = [&] { return weighted_sum(fc_forward(x, p, act), r); };

    DenseCache cache;
    fc_forward(x, p, act, &cache);
    DenseParams grads = DenseParams::zeros(in, out);
    const Matrix dx = fc_backward(cache, r, p, grads);
    report.add(name + ".weight", relative_error(grads.weight, numeric_gradient(p.weight, loss)));
    report.add(name + ".bias", relative_error(grads.bias, numeric_gradient(p.bias, loss)));
    report.add(name + ".input", relative_error(dx, numeric_gradient(x, loss)));
}

void check_norm(Rng& rng, GradReport& report) {
    const std::size_t rows = 1 + rng.uniform_index(3);
    const std::size_t dim = 2 + rng.uniform_index(5);
    NormParams p{random_matrix(rng, 1, dim), random_matrix(rng, 1, dim)};
    Matrix x = random_matrix(rng, rows, dim, 2.0);
    const Matrix r = random_matrix(rng, rows, dim);
    const auto loss = [&] { return weighted_sum(layer_norm(x, p), r); };

    NormCache cache;
    layer_norm(x, p, layer_norm_epsilon, &cache);
    NormParams grads = NormParams::zeros(dim);
    const Matrix dx = layer_norm_backward(cache, r, p, grads);
    report.add("layer_norm.gain", relative_error(grads.gain, numeric_gradient(p.gain, loss)));
    report.add("layer_norm.shift", relative_error(grads.shift, numeric_gradient(p.shift, loss)));
    report.add("layer_norm.input", relative_error(dx, numeric_gradient(x, loss)));
}

void check_softmax(Rng& rng, GradReport& report) {
    const std::size_t n = 1 + rng.uniform_index(6);
    Matrix z = random_matrix(rng, 1, n, 3.0);
    const Matrix r = random_matrix(rng, 1, n);
    const auto loss = [&] {
        const auto p = softmax(z.data());
        return weighted_sum(Matrix::row_vector(p), r);
    };
    const auto probs = softmax(z.data());
    const Matrix dz = Matrix::row_vector(softmax_backward(probs, r.data()));
    report.add("softmax.input", relative_error(dz, numeric_gradient(z, loss)));
}

void check_attention(Rng& rng, GradReport& report) {
    const std::size_t heads = 1 + rng.uniform_index(3);
    const std::size_t dim = heads * (1 + rng.uniform_index(3));
    const std::size_t n = 1 + rng.uniform_index(5);
    AttentionParams p = AttentionParams::init(dim, heads, rng);
    Matrix q = random_matrix(rng, 1, dim, 1.5);
    Matrix k = random_matrix(rng, n, dim, 1.5);
    Matrix v = random_matrix(rng, n, dim, 1.5);
    const Matrix r = random_matrix(rng, 1, dim);
    const auto loss = [&] { return weighted_sum(multi_head_attention(q, k, v, p), r); };

    AttentionCache cache;
    multi_head_attention(q, k, v, p, &cache);
    AttentionParams grads = AttentionParams::zeros(dim, heads);
    const AttentionInputGrads inputs = multi_head_attention_backward(cache, r, p, grads);

    std::vector<Matrix*> params;
    std::vector<std::string> names;
    AttentionParams::visit(p, "attention", [&](const std::string& name, Matrix& m) {
        names.push_back(name);
        params.push_back(&m);
    });
    std::vector<const Matrix*> analytic;
    AttentionParams::visit(grads, "attention", [&](const std::string&, Matrix& m) { analytic.push_back(&m); });
    for (std::size_t i = 0; i < params.size(); ++i) {
        report.add(names[i], relative_error(*analytic[i], numeric_gradient(*params[i], loss)));
    }
    report.add("attention.query_input", relative_error(inputs.query, numeric_gradient(q, loss)));
    report.add("attention.key_input", relative_error(inputs.keys, numeric_gradient(k, loss)));
    report.add("attention.value_input", relative_error(inputs.values, numeric_gradient(v, loss)));
}

void check_output(Rng& rng, GradReport& report) {
    const double target = rng.bernoulli(0.5) ? 1.0 : 0.0;
    Matrix z = random_matrix(rng, 1, 1, 4.0);
    const auto loss = [&] { return bce_loss(sigmoid(z(0, 0)), target); };
    const Matrix analytic(1, 1, sigmoid(z(0, 0)) - target);
    report.add("sigmoid_bce.logit", relative_error(analytic, numeric_gradient(z, loss)));

    Matrix p(1, 1, rng.uniform(0.05, 0.95));
    const auto plain = [&] { return bce_loss(p(0, 0), target); };
    const Matrix dp(1, 1, bce_grad(p(0, 0), target));
    report.add("bce.probability", relative_error(dp, numeric_gradient(p, plain)));
}

} // namespace

ModelConfig tiny_config() {
    ModelConfig c;
    c.changeset_dim = 5;
    c.editor_dim = 4;
    c.editor_slots = 4;
    c.editor_embedding_dim = 3;
    c.user_dim = 3;
    c.edit_dim = 4;
    c.hidden_dim = 8;
    c.heads = 2;
    c.n_pred = 2;
    c.th_e_max = 6;
    return c;
}

GradReport check_layers(std::uint64_t seed) {
    Rng rng(seed);
    GradReport report;
    check_fc(rng, Activation::None, "fc_none", report);
    check_fc(rng, Activation::ReLU, "fc_relu", report);
    check_fc(rng, Activation::Sigmoid, "fc_sigmoid", report);
    check_norm(rng, report);
    check_softmax(rng, report);
    check_attention(rng, report);
    check_output(rng, report);
    return report;
}

GradReport check_model(std::uint64_t seed, std::size_t edits) {
    const ModelConfig config = tiny_config();
    Rng rng(seed);
    OvidParams params = OvidParams::init(config, rng);
    // Non-trivial norm parameters and biases so their gradients are exercised.
    params.for_each([&rng](const std::string& name, Matrix& m) {
        if (name.ends_with(".bias") || name.ends_with(".shift")) {
            for (double& v : m.data()) {
                v = rng.uniform(-0.3, 0.3);
            }
        } else if (name.ends_with(".gain")) {
            for (double& v : m.data()) {
                v = rng.uniform(0.5, 1.5);
            }
        }
    });
    const FeatureRecord record = random_record(rng, config.changeset_dim, config.user_dim, config.edit_dim, edits,
                                               config.editor_slots);
    Example example = make_example(record, config);
    example.target = rng.bernoulli(0.5) ? 1.0 : 0.0;

    OvidParams grads = OvidParams::zeros(config);
    loss_and_gradients(params, config, example, grads);
    const auto loss = [&] { return bce_loss(forward(params, config, example).probability, example.target); };

    std::vector<std::pair<std::string, Matrix*>> p;
    params.for_each([&p](const std::string& name, Matrix& m) { p.emplace_back(name, &m); });
    std::vector<const Matrix*> g;
    grads.for_each([&g](const std::string&, const Matrix& m) { g.push_back(&m); });
    GradReport report;
    for (std::size_t i = 0; i < p.size(); ++i) {
        report.add(p[i].first, relative_error(*g[i], numeric_gradient(*p[i].second, loss)));
    }
    return report;
}

} // namespace ovid::testing
