#pragma once

#include <cstddef>
#include <cstdint>

#include "ovid/features.hpp"
#include "ovid/osm_json.hpp"

namespace ovid {

struct AdamConfig {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// Architecture and training hyperparameters. None of the defaults are
/// measured values; they are starting points.
struct ModelConfig {
    // input layout
    std::size_t changeset_dim = 12; // including the categorical editor id
    std::size_t user_dim = 7;
    std::size_t edit_dim = 14;
    std::size_t editor_dim = 11;    // position of the editor id in x_c
    std::size_t editor_slots = 21;
    std::size_t editor_embedding_dim = 8;

    // architecture
    std::size_t hidden_dim = 64;
    std::size_t heads = 4;
    std::size_t n_pred = 2;
    std::size_t th_e_max = 100;
    double threshold = 0.5;

    // training
    AdamConfig adam;
    std::size_t batch_size = 32;
    std::size_t max_epochs = 100;
    std::size_t patience = 10;
    bool tune_threshold = false;
    std::uint64_t seed = 42;

    /// Throws std::invalid_argument on inconsistent values.
    void validate() const;

    /// Input dimensions taken from a feature layout.
    void adopt_layout(const FeatureLayout& layout);
};

Json to_json(const ModelConfig& config);
/// Missing keys keep their defaults.
ModelConfig model_config_from_json(const Json& value, ModelConfig base = {});

} // namespace ovid
