#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ovid/attention.hpp"
#include "ovid/features.hpp"
#include "ovid/matrix.hpp"
#include "ovid/model_config.hpp"
#include "ovid/nn_layers.hpp"
#include "ovid/rng.hpp"

namespace ovid {

/// Every learned weight of the classifier.
struct OvidParams {
    Matrix editor_embedding;          // editor_slots x editor_embedding_dim
    DenseParams changeset_refiner;    // X_c -> X_c'  (ReLU)
    DenseParams user_refiner;         // X_u -> X_u'  (ReLU)
    LayerParams fusion;               // [X_c', X_u'] -> X_cu
    DenseParams edit_refiner;         // M_e -> M_e'  (no activation, row-shared)
    AttentionParams attention;        // query X_cu, keys/values M_e'
    LayerParams edit_summary;         // X_E -> X_E'
    std::vector<LayerParams> prediction; // n_pred blocks, [X_cu, X_E'] -> X_p'
    DenseParams output;               // X_p' -> logit

    /// Xavier-uniform weights, zero biases, unit gains.
    static OvidParams init(const ModelConfig& config, Rng& rng);
    static OvidParams zeros(const ModelConfig& config);

    template <typename Self, typename Fn>
    static void visit(Self& self, Fn&& fn) {
        fn(std::string("editor_embedding"), self.editor_embedding);
        DenseParams::visit(self.changeset_refiner, "changeset_refiner", fn);
        DenseParams::visit(self.user_refiner, "user_refiner", fn);
        LayerParams::visit(self.fusion, "fusion", fn);
        DenseParams::visit(self.edit_refiner, "edit_refiner", fn);
        AttentionParams::visit(self.attention, "attention", fn);
        LayerParams::visit(self.edit_summary, "edit_summary", fn);
        for (std::size_t i = 0; i < self.prediction.size(); ++i) {
            LayerParams::visit(self.prediction[i], "prediction" + std::to_string(i), fn);
        }
        DenseParams::visit(self.output, "output", fn);
    }

    template <typename Fn>
    void for_each(Fn&& fn) {
        visit(*this, fn);
    }
    template <typename Fn>
    void for_each(Fn&& fn) const {
        visit(*this, fn);
    }

    std::size_t parameter_count() const;
    friend bool operator==(const OvidParams&, const OvidParams&);
};

/// One changeset ready for the network (already scaled).
struct Example {
    ChangesetId changeset_id = 0;
    Matrix changeset; // 1 x changeset_dim
    Matrix user;      // 1 x user_dim
    Matrix edits;     // n x edit_dim
    double target = 0.0;
};

/// Throws ShapeMismatch when the record does not fit the config.
Example make_example(const FeatureRecord& record, const ModelConfig& config);

/// Everything backward() needs from one forward pass.
struct ForwardRecord {
    bool recorded = false;
    bool edits_used = false;
    std::size_t editor_index = 0;
    DenseCache changeset_fc;
    DenseCache user_fc;
    DenseCache fusion_fc;
    NormCache fusion_norm;
    DenseCache edit_fc;
    AttentionCache attention;
    DenseCache summary_fc;
    NormCache summary_norm;
    std::vector<DenseCache> prediction_fc;
    std::vector<NormCache> prediction_norm;
    DenseCache output_fc;
    double probability = 0.0;
};

struct ForwardResult {
    double probability = 0.0;
    double logit = 0.0;
    /// Per head attention weights over the edits; empty when the edit branch
    /// is cut off (no edits, or more than th_e_max).
    std::vector<std::vector<double>> attention;
    bool cutoff = false;
};

/// True when the edit branch is replaced by zeros for `edit_count` edits.
bool edit_branch_cut(std::size_t edit_count, const ModelConfig& config) noexcept;

ForwardResult forward(const OvidParams& params, const ModelConfig& config, const Example& example,
                      ForwardRecord* record = nullptr);

/// Accumulates dL/dθ into `grads`, given dL/dlogit. Throws NoForwardRecorded.
void backward(const OvidParams& params, const ModelConfig& config, const ForwardRecord& record, double grad_logit,
              OvidParams& grads);

/// BCE loss of one example; adds its gradient to `grads`.
double loss_and_gradients(const OvidParams& params, const ModelConfig& config, const Example& example,
                          OvidParams& grads);

struct ChangesetPrediction {
    ChangesetId changeset_id = 0;
    Label label = Label::Regular;
    double probability = 0.0;
    std::vector<std::vector<double>> attention;
};

/// label = Vandalism iff probability >= threshold.
ChangesetPrediction predict(const OvidParams& params, const ModelConfig& config, const Example& example,
                            double threshold);

} // namespace ovid
