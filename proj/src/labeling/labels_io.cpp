#include <istream>
#include <ostream>

#include "ovid/error.hpp"
#include "ovid/labeling.hpp"

namespace ovid {

void write_labels_jsonl(std::ostream& out, const LabeledDataset& dataset) {
    for (const VandalismLabel& label : dataset.labels) {
        const auto split = dataset.splits.find(label.changeset_id);
        out << Json{{"changeset_id", label.changeset_id},
                    {"label", to_string(label.label)},
                    {"provenance", to_string(label.provenance)},
                    {"split", split == dataset.splits.end() ? Json(nullptr) : Json(to_string(split->second))}}
                   .dump()
            << '\n';
    }
}

LabeledDataset read_labels_jsonl(std::istream& in) {
    LabeledDataset dataset;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        const auto fail = [line_no](const std::string& what) {
            return DataError("labels record " + std::to_string(line_no) + ": " + what);
        };
        try {
            const Json record = Json::parse(line);
            VandalismLabel label;
            label.changeset_id = record.at("changeset_id").get<ChangesetId>();
            const auto value = parse_label(record.at("label").get<std::string>());
            const auto provenance = parse_provenance(record.at("provenance").get<std::string>());
            if (!value || !provenance) {
                throw fail("unknown label or provenance");
            }
            label.label = *value;
            label.provenance = *provenance;
            dataset.labels.push_back(label);
            const Json& split = record.at("split");
            if (!split.is_null()) {
                const auto parsed = parse_split(split.get<std::string>());
                if (!parsed) {
                    throw fail("unknown split '" + split.get<std::string>() + "'");
                }
                dataset.splits.emplace(label.changeset_id, *parsed);
            }
        } catch (const nlohmann::json::exception& e) {
            throw fail(e.what());
        }
    }
    return dataset;
}

Json labels_manifest(const LabeledDataset& dataset) {
    std::size_t positives = 0;
    std::array<std::size_t, 3> per_split{};
    std::array<std::array<std::size_t, 2>, 3> per_split_class{};
    for (const VandalismLabel& label : dataset.labels) {
        const bool vandal = label.label == Label::Vandalism;
        positives += vandal ? 1 : 0;
        const auto it = dataset.splits.find(label.changeset_id);
        if (it != dataset.splits.end()) {
            const auto s = static_cast<std::size_t>(it->second);
            ++per_split[s];
            ++per_split_class[s][vandal ? 1 : 0];
        }
    }
    const auto total = static_cast<double>(dataset.labels.size());
    Json splits = Json::object();
    for (std::size_t s = 0; s < 3; ++s) {
        splits[std::string(to_string(static_cast<Split>(s)))] =
            Json{{"examples", per_split[s]},
                 {"vandalism", per_split_class[s][1]},
                 {"regular", per_split_class[s][0]},
                 {"target_ratio", dataset.ratios.as_array()[s]},
                 {"realized_ratio", total > 0 ? static_cast<double>(per_split[s]) / total : 0.0}};
    }
    return Json{{"seed", dataset.seed},
                {"examples", dataset.labels.size()},
                {"vandalism", positives},
                {"regular", dataset.labels.size() - positives},
                {"splits", std::move(splits)},
                {"warnings", dataset.warnings}};
}

} // namespace ovid
