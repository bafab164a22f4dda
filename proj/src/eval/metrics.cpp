#include "ovid/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "ovid/error.hpp"

namespace ovid {

void ConfusionMatrix::add(bool predicted_vandalism, bool actual_vandalism) noexcept {
    if (predicted_vandalism) {
        ++(actual_vandalism ? tp : fp);
    } else {
        ++(actual_vandalism ? fn : tn);
    }
}

double f1_score(double precision, double recall) noexcept {
    const double sum = precision + recall;
    return sum > 0.0 ? 2.0 * precision * recall / sum : 0.0;
}

EvalReport make_report(const ConfusionMatrix& c) {
    const auto ratio = [](std::size_t num, std::size_t den) {
        return den == 0 ? Metric{0.0, false} : Metric{static_cast<double>(num) / static_cast<double>(den), true};
    };
    EvalReport r;
    r.confusion = c;
    r.precision = ratio(c.tp, c.tp + c.fp);
    r.recall = ratio(c.tp, c.tp + c.fn);
    r.accuracy = ratio(c.tp + c.tn, c.total());
    r.f1 = Metric{f1_score(r.precision.value, r.recall.value), r.precision.defined && r.recall.defined &&
                                                                   r.precision.value + r.recall.value > 0.0};
    return r;
}

EvalReport evaluate(std::span<const Prediction> predictions, const std::map<ChangesetId, Label>& labels) {
    std::set<ChangesetId> seen;
    ConfusionMatrix confusion;
    for (const Prediction& p : predictions) {
        const auto it = labels.find(p.changeset_id);
        if (it == labels.end()) {
            throw IdSetMismatch("prediction for unlabeled changeset " + std::to_string(p.changeset_id));
        }
        if (!seen.insert(p.changeset_id).second) {
            throw IdSetMismatch("duplicate prediction for changeset " + std::to_string(p.changeset_id));
        }
        confusion.add(p.vandalism, it->second == Label::Vandalism);
    }
    if (seen.size() != labels.size()) {
        throw IdSetMismatch(std::to_string(labels.size() - seen.size()) + " labeled changesets have no prediction");
    }
    return make_report(confusion);
}

Json to_json(const EvalReport& report) {
    const auto metric = [](const Metric& m) { return Json{{"value", m.value}, {"defined", m.defined}}; };
    const ConfusionMatrix& c = report.confusion;
    return Json{{"confusion", Json{{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}, {"tn", c.tn}}},
                {"precision", metric(report.precision)},
                {"recall", metric(report.recall)},
                {"f1", metric(report.f1)},
                {"accuracy", metric(report.accuracy)}};
}

std::string render_table(const std::vector<std::pair<std::string, EvalReport>>& rows) {
    std::size_t name_width = 6;
    for (const auto& [name, report] : rows) {
        name_width = std::max(name_width, name.size());
    }
    const auto cell = [](const Metric& m) {
        char buf[32];
        if (m.defined) {
            std::snprintf(buf, sizeof buf, "%10.2f", 100.0 * m.value);
        } else {
            std::snprintf(buf, sizeof buf, "%10s", "n/a");
        }
        return std::string(buf);
    };
    std::string out;
    char header[128];
    std::snprintf(header, sizeof header, "%-*s%10s%10s%10s%10s\n", static_cast<int>(name_width), "Method",
                  "Precision", "Recall", "F1", "Accuracy");
    out += header;
    for (const auto& [name, r] : rows) {
        out += name;
        out.append(name_width - name.size(), ' ');
        out += cell(r.precision) + cell(r.recall) + cell(r.f1) + cell(r.accuracy) + "\n";
    }
    return out;
}

} // namespace ovid
