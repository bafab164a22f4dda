#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "ovid/baselines.hpp"
#include "ovid/features.hpp"
#include "ovid/labeling.hpp"
#include "ovid/model_config.hpp"

namespace ovid {

/// Everything a pipeline run can be configured with. The JSON form has the
/// sections "labeling", "features", "model" and "rules"; each is optional.
struct PipelineConfig {
    std::uint64_t seed = 42;
    SplitRatios ratios;
    FeatureConfig features;
    ModelConfig model;
    bool model_seed_from_config = false;
    RuleSet rules;

    /// Parses a config document on top of the defaults. `seed` comes from the
    /// command line; a "seed" inside the model section wins for training.
    static PipelineConfig from_json(const Json& value, std::uint64_t seed);
    static PipelineConfig load(const std::filesystem::path& path, std::uint64_t seed);

    Json to_json() const;
    std::string hash() const;
};

} // namespace ovid
