#include "ovid/ovid_model.hpp"

#include <algorithm>
#include <cmath>

#include "ovid/error.hpp"
#include "ovid/loss.hpp"

namespace ovid {

namespace {

std::size_t refined_changeset_inputs(const ModelConfig& c) { return c.changeset_dim - 1 + c.editor_embedding_dim; }

} // namespace

OvidParams OvidParams::zeros(const ModelConfig& c) {
    const std::size_t h = c.hidden_dim;
    OvidParams p;
    p.editor_embedding = Matrix(c.editor_slots, c.editor_embedding_dim);
    p.changeset_refiner = DenseParams::zeros(refined_changeset_inputs(c), h);
    p.user_refiner = DenseParams::zeros(c.user_dim, h);
    p.fusion = LayerParams::zeros(2 * h, h);
    p.edit_refiner = DenseParams::zeros(c.edit_dim, h);
    p.attention = AttentionParams::zeros(h, c.heads);
    p.edit_summary = LayerParams::zeros(h, h);
    for (std::size_t i = 0; i < c.n_pred; ++i) {
        p.prediction.push_back(LayerParams::zeros(i == 0 ? 2 * h : h, h));
    }
    p.output = DenseParams::zeros(h, 1);
    return p;
}

OvidParams OvidParams::init(const ModelConfig& c, Rng& rng) {
    c.validate();
    const std::size_t h = c.hidden_dim;
    OvidParams p;
    p.editor_embedding = Matrix(c.editor_slots, c.editor_embedding_dim);
    xavier_uniform(p.editor_embedding, rng);
    p.changeset_refiner = DenseParams::xavier(refined_changeset_inputs(c), h, rng);
    p.user_refiner = DenseParams::xavier(c.user_dim, h, rng);
    p.fusion = LayerParams::init(2 * h, h, rng);
    p.edit_refiner = DenseParams::xavier(c.edit_dim, h, rng);
    p.attention = AttentionParams::init(h, c.heads, rng);
    p.edit_summary = LayerParams::init(h, h, rng);
    for (std::size_t i = 0; i < c.n_pred; ++i) {
        p.prediction.push_back(LayerParams::init(i == 0 ? 2 * h : h, h, rng));
    }
    p.output = DenseParams::xavier(h, 1, rng);
    return p;
}

std::size_t OvidParams::parameter_count() const {
    std::size_t n = 0;
    for_each([&n](const std::string&, const Matrix& m) { n += m.size(); });
    return n;
}

bool operator==(const OvidParams& a, const OvidParams& b) {
    std::vector<const Matrix*> left;
    std::vector<const Matrix*> right;
    a.for_each([&left](const std::string&, const Matrix& m) { left.push_back(&m); });
    b.for_each([&right](const std::string&, const Matrix& m) { right.push_back(&m); });
    if (left.size() != right.size()) {
        return false;
    }
    for (std::size_t i = 0; i < left.size(); ++i) {
        if (!(*left[i] == *right[i])) {
            return false;
        }
    }
    return true;
}

Example make_example(const FeatureRecord& record, const ModelConfig& config) {
    if (record.x_c.size() != config.changeset_dim || record.x_u.size() != config.user_dim) {
        throw ShapeMismatch("changeset " + std::to_string(record.changeset_id) + ": feature dimensions " +
                            std::to_string(record.x_c.size()) + "/" + std::to_string(record.x_u.size()) +
                            " do not match the model (" + std::to_string(config.changeset_dim) + "/" +
                            std::to_string(config.user_dim) + ")");
    }
    Example ex;
    ex.changeset_id = record.changeset_id;
    ex.changeset = Matrix::row_vector(record.x_c);
    ex.user = Matrix::row_vector(record.x_u);
    ex.edits = Matrix::from_rows(record.m_e, config.edit_dim);
    ex.target = record.label == Label::Vandalism ? 1.0 : 0.0;
    return ex;
}

bool edit_branch_cut(std::size_t edit_count, const ModelConfig& config) noexcept {
    return edit_count == 0 || edit_count > config.th_e_max;
}

ForwardResult forward(const OvidParams& params, const ModelConfig& config, const Example& example,
                      ForwardRecord* record) {
    if (example.changeset.cols() != config.changeset_dim || example.user.cols() != config.user_dim ||
        (example.edits.rows() > 0 && example.edits.cols() != config.edit_dim)) {
        throw ShapeMismatch("forward: example dimensions do not match the model config");
    }
    ForwardRecord local;
    ForwardRecord& rec = record != nullptr ? *record : local;
    const std::size_t h = config.hidden_dim;

    // Changeset features with the categorical editor id swapped for its embedding.
    const double raw_editor = example.changeset(0, config.editor_dim);
    rec.editor_index = raw_editor >= 0.0 && raw_editor < static_cast<double>(config.editor_slots)
                           ? static_cast<std::size_t>(std::lround(raw_editor))
                           : config.editor_slots - 1;
    rec.editor_index = std::min(rec.editor_index, config.editor_slots - 1);
    Matrix changeset_in(1, refined_changeset_inputs(config));
    std::size_t col = 0;
    for (std::size_t i = 0; i < config.changeset_dim; ++i) {
        if (i != config.editor_dim) {
            changeset_in(0, col++) = example.changeset(0, i);
        }
    }
    for (std::size_t i = 0; i < config.editor_embedding_dim; ++i) {
        changeset_in(0, col++) = params.editor_embedding(rec.editor_index, i);
    }

    const Matrix xc = fc_forward(changeset_in, params.changeset_refiner, Activation::ReLU, &rec.changeset_fc);
    const Matrix xu = fc_forward(example.user, params.user_refiner, Activation::ReLU, &rec.user_fc);
    const Matrix xcu = layer_norm(fc_forward(hconcat(xc, xu), params.fusion.dense, Activation::None, &rec.fusion_fc),
                                  params.fusion.norm, layer_norm_epsilon, &rec.fusion_norm);

    ForwardResult result;
    Matrix xe_refined(1, h);
    const std::size_t n = example.edits.rows();
    rec.edits_used = !edit_branch_cut(n, config);
    result.cutoff = !rec.edits_used;
    if (rec.edits_used) {
        const Matrix me = fc_forward(example.edits, params.edit_refiner, Activation::None, &rec.edit_fc);
        const Matrix xe = multi_head_attention(xcu, me, me, params.attention, &rec.attention);
        xe_refined = layer_norm(fc_forward(xe, params.edit_summary.dense, Activation::None, &rec.summary_fc),
                                params.edit_summary.norm, layer_norm_epsilon, &rec.summary_norm);
        result.attention = rec.attention.weights;
    }

    Matrix xp = hconcat(xcu, xe_refined);
    rec.prediction_fc.assign(config.n_pred, DenseCache{});
    rec.prediction_norm.assign(config.n_pred, NormCache{});
    for (std::size_t i = 0; i < config.n_pred; ++i) {
        xp = layer_norm(fc_forward(xp, params.prediction[i].dense, Activation::None, &rec.prediction_fc[i]),
                        params.prediction[i].norm, layer_norm_epsilon, &rec.prediction_norm[i]);
    }
    const Matrix logit = fc_forward(xp, params.output, Activation::None, &rec.output_fc);
    result.logit = logit(0, 0);
    // Keep the output strictly inside (0, 1) even when the sigmoid saturates.
    result.probability = std::clamp(sigmoid(result.logit), 0x1p-1022, 1.0 - 0x1p-53);
    rec.probability = result.probability;
    rec.recorded = true;
    return result;
}

void backward(const OvidParams& params, const ModelConfig& config, const ForwardRecord& rec, double grad_logit,
              OvidParams& grads) {
    if (!rec.recorded) {
        throw NoForwardRecorded("backward called without a recorded forward pass");
    }
    const std::size_t h = config.hidden_dim;

    Matrix grad = fc_backward(rec.output_fc, Matrix(1, 1, grad_logit), params.output, grads.output);
    for (std::size_t i = config.n_pred; i-- > 0;) {
        grad = layer_norm_backward(rec.prediction_norm[i], grad, params.prediction[i].norm, grads.prediction[i].norm);
        grad = fc_backward(rec.prediction_fc[i], grad, params.prediction[i].dense, grads.prediction[i].dense);
    }
    Matrix grad_xcu = slice_cols(grad, 0, h);

    if (rec.edits_used) {
        Matrix grad_xe = slice_cols(grad, h, h);
        grad_xe = layer_norm_backward(rec.summary_norm, grad_xe, params.edit_summary.norm, grads.edit_summary.norm);
        grad_xe = fc_backward(rec.summary_fc, grad_xe, params.edit_summary.dense, grads.edit_summary.dense);
        AttentionInputGrads att = multi_head_attention_backward(rec.attention, grad_xe, params.attention, grads.attention);
        grad_xcu += att.query;
        att.keys += att.values;
        fc_backward(rec.edit_fc, att.keys, params.edit_refiner, grads.edit_refiner);
    }

    grad = layer_norm_backward(rec.fusion_norm, grad_xcu, params.fusion.norm, grads.fusion.norm);
    grad = fc_backward(rec.fusion_fc, grad, params.fusion.dense, grads.fusion.dense);
    fc_backward(rec.user_fc, slice_cols(grad, h, h), params.user_refiner, grads.user_refiner);
    const Matrix grad_in = fc_backward(rec.changeset_fc, slice_cols(grad, 0, h), params.changeset_refiner,
                                       grads.changeset_refiner);
    const std::size_t offset = config.changeset_dim - 1;
    for (std::size_t i = 0; i < config.editor_embedding_dim; ++i) {
        grads.editor_embedding(rec.editor_index, i) += grad_in(0, offset + i);
    }
}

double loss_and_gradients(const OvidParams& params, const ModelConfig& config, const Example& example,
                          OvidParams& grads) {
    ForwardRecord rec;
    const ForwardResult out = forward(params, config, example, &rec);
    // d/dz of BCE(sigmoid(z)) collapses to p - y.
    backward(params, config, rec, out.probability - example.target, grads);
    return bce_loss(out.probability, example.target);
}

ChangesetPrediction predict(const OvidParams& params, const ModelConfig& config, const Example& example,
                            double threshold) {
    ForwardResult out = forward(params, config, example);
    return ChangesetPrediction{example.changeset_id,
                               out.probability >= threshold ? Label::Vandalism : Label::Regular, out.probability,
                               std::move(out.attention)};
}

} // namespace ovid
