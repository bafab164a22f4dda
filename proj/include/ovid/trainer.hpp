#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ovid/metrics.hpp"
#include "ovid/model_config.hpp"
#include "ovid/ovid_model.hpp"

namespace ovid {

/// Adam with bias correction over every parameter of an OvidParams.
class AdamOptimizer {
public:
    AdamOptimizer(const AdamConfig& config, const OvidParams& like);

    void step(OvidParams& params, const OvidParams& grads);
    std::size_t steps() const noexcept { return m_step; }

private:
    AdamConfig m_config;
    std::size_t m_step = 0;
    OvidParams m_first;
    OvidParams m_second;
};

struct EpochLog {
    std::size_t epoch = 0;
    double train_loss = 0.0;      // mean BCE over the epoch's examples
    double validation_loss = 0.0;
    double validation_f1 = 0.0;
    double validation_accuracy = 0.0;
};

struct TrainingResult {
    OvidParams params; // best-validation-F1 snapshot
    std::vector<EpochLog> log;
    std::size_t best_epoch = 0;
    double best_validation_f1 = 0.0;
    double threshold = 0.5;
    bool stopped_early = false;
};

/// Mean loss and confusion of a parameter set over examples.
struct Evaluation {
    double loss = 0.0;
    ConfusionMatrix confusion;
};

Evaluation evaluate_examples(const OvidParams& params, const ModelConfig& config, std::span<const Example> examples,
                             double threshold);

/// Minibatch Adam on mean BCE, shuffled per epoch from `config.seed`, early
/// stopping on validation F1. Throws EmptyTrainSet or DivergedLoss.
TrainingResult train(const ModelConfig& config, std::span<const Example> train_set,
                     std::span<const Example> validation_set);

/// Continues from given parameters (used for optimizer property checks).
TrainingResult train_from(const ModelConfig& config, OvidParams initial, std::span<const Example> train_set,
                          std::span<const Example> validation_set);

Json to_json(const TrainingResult& result, const ModelConfig& config);

} // namespace ovid
