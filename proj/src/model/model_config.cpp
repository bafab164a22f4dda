#include "ovid/model_config.hpp"

#include <stdexcept>
#include <string>

namespace ovid {

void ModelConfig::validate() const {
    const auto fail = [](const std::string& what) { throw std::invalid_argument("model config: " + what); };
    if (th_e_max < 1) {
        fail("th_e_max must be >= 1");
    }
    if (!(threshold > 0.0 && threshold < 1.0)) {
        fail("threshold must lie in (0, 1)");
    }
    if (heads == 0 || hidden_dim == 0 || hidden_dim % heads != 0) {
        fail("heads (" + std::to_string(heads) + ") must divide hidden_dim (" + std::to_string(hidden_dim) + ")");
    }
    if (n_pred < 1) {
        fail("n_pred must be >= 1");
    }
    if (editor_dim >= changeset_dim || editor_slots == 0) {
        fail("editor id dimension must lie inside the changeset features");
    }
    if (batch_size == 0) {
        fail("batch_size must be >= 1");
    }
    if (adam.learning_rate < 0.0 || adam.beta1 < 0.0 || adam.beta1 >= 1.0 || adam.beta2 < 0.0 || adam.beta2 >= 1.0 ||
        adam.epsilon <= 0.0) {
        fail("invalid Adam hyperparameters");
    }
}

void ModelConfig::adopt_layout(const FeatureLayout& layout) {
    changeset_dim = layout.changeset_dims.size();
    user_dim = layout.user_dims.size();
    edit_dim = layout.edit_dims.size();
    editor_dim = layout.editor_dim;
    editor_slots = layout.editors.slots();
}

Json to_json(const ModelConfig& c) {
    return Json{{"changeset_dim", c.changeset_dim},
                {"user_dim", c.user_dim},
                {"edit_dim", c.edit_dim},
                {"editor_dim", c.editor_dim},
                {"editor_slots", c.editor_slots},
                {"editor_embedding_dim", c.editor_embedding_dim},
                {"hidden_dim", c.hidden_dim},
                {"heads", c.heads},
                {"n_pred", c.n_pred},
                {"th_e_max", c.th_e_max},
                {"threshold", c.threshold},
                {"learning_rate", c.adam.learning_rate},
                {"beta1", c.adam.beta1},
                {"beta2", c.adam.beta2},
                {"adam_epsilon", c.adam.epsilon},
                {"batch_size", c.batch_size},
                {"max_epochs", c.max_epochs},
                {"patience", c.patience},
                {"tune_threshold", c.tune_threshold},
                {"seed", c.seed}};
}

ModelConfig model_config_from_json(const Json& v, ModelConfig c) {
    c.changeset_dim = v.value("changeset_dim", c.changeset_dim);
    c.user_dim = v.value("user_dim", c.user_dim);
    c.edit_dim = v.value("edit_dim", c.edit_dim);
    c.editor_dim = v.value("editor_dim", c.editor_dim);
    c.editor_slots = v.value("editor_slots", c.editor_slots);
    c.editor_embedding_dim = v.value("editor_embedding_dim", c.editor_embedding_dim);
    c.hidden_dim = v.value("hidden_dim", c.hidden_dim);
    c.heads = v.value("heads", c.heads);
    c.n_pred = v.value("n_pred", c.n_pred);
    c.th_e_max = v.value("th_e_max", c.th_e_max);
    c.threshold = v.value("threshold", c.threshold);
    c.adam.learning_rate = v.value("learning_rate", c.adam.learning_rate);
    c.adam.beta1 = v.value("beta1", c.adam.beta1);
    c.adam.beta2 = v.value("beta2", c.adam.beta2);
    c.adam.epsilon = v.value("adam_epsilon", c.adam.epsilon);
    c.batch_size = v.value("batch_size", c.batch_size);
    c.max_epochs = v.value("max_epochs", c.max_epochs);
    c.patience = v.value("patience", c.patience);
    c.tune_threshold = v.value("tune_threshold", c.tune_threshold);
    c.seed = v.value("seed", c.seed);
    return c;
}

} // namespace ovid
