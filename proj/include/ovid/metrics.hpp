#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ovid/osm_json.hpp"
#include "ovid/osm_types.hpp"

namespace ovid {

struct ConfusionMatrix {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    std::size_t tn = 0;

    void add(bool predicted_vandalism, bool actual_vandalism) noexcept;
    std::size_t total() const noexcept { return tp + fp + fn + tn; }
    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

/// A ratio that is 0 with defined=false when its denominator is zero.
struct Metric {
    double value = 0.0;
    bool defined = false;
};

struct EvalReport {
    ConfusionMatrix confusion;
    Metric precision;
    Metric recall;
    Metric f1;
    Metric accuracy;
};

EvalReport make_report(const ConfusionMatrix& confusion);

/// Harmonic mean; 0 when both inputs are 0.
double f1_score(double precision, double recall) noexcept;

struct Prediction {
    ChangesetId changeset_id = 0;
    bool vandalism = false;
    double score = 0.0;
    std::vector<std::string> fired_rules;
};

/// Throws IdSetMismatch unless predictions and labels cover the same ids.
EvalReport evaluate(std::span<const Prediction> predictions, const std::map<ChangesetId, Label>& labels);

Json to_json(const EvalReport& report);

/// Method x metric table, percentages with two decimals.
std::string render_table(const std::vector<std::pair<std::string, EvalReport>>& rows);

} // namespace ovid
