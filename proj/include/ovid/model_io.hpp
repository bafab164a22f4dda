#pragma once

#include <filesystem>
#include <string>

#include "ovid/features.hpp"
#include "ovid/model_config.hpp"
#include "ovid/ovid_model.hpp"

namespace ovid {

inline constexpr int model_schema_version = 1;

/// A trained model together with what it needs to score new changesets.
struct ModelBundle {
    ModelConfig config;
    OvidParams params;
    Scaler scaler;
    std::string layout_hash;
    double threshold = 0.5;
};

Json params_to_json(const OvidParams& params);
/// Shapes must match `config`; throws CompatibilityError otherwise.
OvidParams params_from_json(const Json& value, const ModelConfig& config);

Json to_json(const ModelBundle& bundle);
ModelBundle model_bundle_from_json(const Json& value);

void save_model(const std::filesystem::path& path, const ModelBundle& bundle);
ModelBundle load_model(const std::filesystem::path& path);

/// Throws CompatibilityError when the model was trained on another layout.
void require_layout(const ModelBundle& bundle, const FeatureLayout& layout);

} // namespace ovid
