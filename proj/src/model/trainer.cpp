#include "ovid/trainer.hpp"

#include <cmath>
#include <numeric>

#include "ovid/error.hpp"
#include "ovid/loss.hpp"

namespace ovid {

AdamOptimizer::AdamOptimizer(const AdamConfig& config, const OvidParams& like)
    : m_config(config), m_first(like), m_second(like) {
    m_first.for_each([](const std::string&, Matrix& m) { m.fill(0.0); });
    m_second.for_each([](const std::string&, Matrix& m) { m.fill(0.0); });
}

void AdamOptimizer::step(OvidParams& params, const OvidParams& grads) {
    ++m_step;
    std::vector<Matrix*> p;
    std::vector<const Matrix*> g;
    std::vector<Matrix*> m1;
    std::vector<Matrix*> m2;
    params.for_each([&p](const std::string&, Matrix& m) { p.push_back(&m); });
    grads.for_each([&g](const std::string&, const Matrix& m) { g.push_back(&m); });
    m_first.for_each([&m1](const std::string&, Matrix& m) { m1.push_back(&m); });
    m_second.for_each([&m2](const std::string&, Matrix& m) { m2.push_back(&m); });

    const double b1 = m_config.beta1;
    const double b2 = m_config.beta2;
    const double correction1 = 1.0 - std::pow(b1, static_cast<double>(m_step));
    const double correction2 = 1.0 - std::pow(b2, static_cast<double>(m_step));
    for (std::size_t i = 0; i < p.size(); ++i) {
        auto pd = p[i]->data();
        const auto gd = g[i]->data();
        auto md = m1[i]->data();
        auto vd = m2[i]->data();
        for (std::size_t j = 0; j < pd.size(); ++j) {
            md[j] = b1 * md[j] + (1.0 - b1) * gd[j];
            vd[j] = b2 * vd[j] + (1.0 - b2) * gd[j] * gd[j];
            const double m_hat = md[j] / correction1;
            const double v_hat = vd[j] / correction2;
            pd[j] -= m_config.learning_rate * m_hat / (std::sqrt(v_hat) + m_config.epsilon);
        }
    }
}

Evaluation evaluate_examples(const OvidParams& params, const ModelConfig& config, std::span<const Example> examples,
                             double threshold) {
    Evaluation eval;
    for (const Example& ex : examples) {
        const ForwardResult out = forward(params, config, ex);
        eval.loss += bce_loss(out.probability, ex.target);
        eval.confusion.add(out.probability >= threshold, ex.target > 0.5);
    }
    if (!examples.empty()) {
        eval.loss /= static_cast<double>(examples.size());
    }
    return eval;
}

namespace {

double tune_threshold(const OvidParams& params, const ModelConfig& config, std::span<const Example> validation) {
    std::vector<std::pair<double, double>> scored; // (probability, target)
    for (const Example& ex : validation) {
        scored.emplace_back(forward(params, config, ex).probability, ex.target);
    }
    double best = config.threshold;
    double best_f1 = -1.0;
    for (int step = 1; step < 20; ++step) {
        const double t = 0.05 * step;
        ConfusionMatrix c;
        for (const auto& [p, y] : scored) {
            c.add(p >= t, y > 0.5);
        }
        const double f1 = make_report(c).f1.value;
        if (f1 > best_f1 || (f1 == best_f1 && std::abs(t - 0.5) < std::abs(best - 0.5))) {
            best_f1 = f1;
            best = t;
        }
    }
    return best;
}

} // namespace

TrainingResult train_from(const ModelConfig& config, OvidParams initial, std::span<const Example> train_set,
                          std::span<const Example> validation_set) {
    config.validate();
    if (train_set.empty()) {
        throw EmptyTrainSet("training set is empty");
    }

    TrainingResult result;
    result.threshold = config.threshold;
    OvidParams params = std::move(initial);
    OvidParams grads = OvidParams::zeros(config);
    AdamOptimizer optimizer(config.adam, params);
    Rng shuffle_rng(config.seed ^ 0x9e3779b97f4a7c15ULL);

    std::vector<std::size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    bool have_best = false;
    std::size_t since_best = 0;
    for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
        shuffle_rng.shuffle(std::span<std::size_t>(order));
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t end = std::min(order.size(), start + config.batch_size);
            grads.for_each([](const std::string&, Matrix& m) { m.fill(0.0); });
            double batch_loss = 0.0;
            for (std::size_t i = start; i < end; ++i) {
                batch_loss += loss_and_gradients(params, config, train_set[order[i]], grads);
            }
            if (!std::isfinite(batch_loss)) {
                throw DivergedLoss("training loss became non-finite in epoch " + std::to_string(epoch));
            }
            const double scale = 1.0 / static_cast<double>(end - start);
            grads.for_each([scale](const std::string&, Matrix& m) { m *= scale; });
            optimizer.step(params, grads);
            epoch_loss += batch_loss;
        }

        EpochLog entry;
        entry.epoch = epoch;
        entry.train_loss = epoch_loss / static_cast<double>(train_set.size());
        const std::span<const Example> selection = validation_set.empty() ? train_set : validation_set;
        const Evaluation eval = evaluate_examples(params, config, selection, config.threshold);
        const EvalReport report = make_report(eval.confusion);
        entry.validation_loss = eval.loss;
        entry.validation_f1 = report.f1.value;
        entry.validation_accuracy = report.accuracy.value;
        result.log.push_back(entry);

        if (!have_best || entry.validation_f1 > result.best_validation_f1) {
            have_best = true;
            result.best_validation_f1 = entry.validation_f1;
            result.best_epoch = epoch;
            result.params = params;
            since_best = 0;
        } else if (++since_best >= config.patience) {
            result.stopped_early = true;
            break;
        }
    }
    if (!have_best) {
        result.params = params;
    }
    if (config.tune_threshold && !validation_set.empty()) {
        result.threshold = tune_threshold(result.params, config, validation_set);
    }
    return result;
}

TrainingResult train(const ModelConfig& config, std::span<const Example> train_set,
                     std::span<const Example> validation_set) {
    config.validate();
    Rng init_rng(config.seed);
    return train_from(config, OvidParams::init(config, init_rng), train_set, validation_set);
}

Json to_json(const TrainingResult& result, const ModelConfig& config) {
    Json epochs = Json::array();
    for (const EpochLog& e : result.log) {
        epochs.push_back(Json{{"epoch", e.epoch},
                              {"train_loss", e.train_loss},
                              {"validation_loss", e.validation_loss},
                              {"validation_f1", e.validation_f1},
                              {"validation_accuracy", e.validation_accuracy}});
    }
    return Json{{"optimizer", "adam"},
                {"loss", "binary_cross_entropy"},
                {"config", to_json(config)},
                {"best_epoch", result.best_epoch},
                {"best_validation_f1", result.best_validation_f1},
                {"threshold", result.threshold},
                {"stopped_early", result.stopped_early},
                {"epochs", std::move(epochs)}};
}

} // namespace ovid
