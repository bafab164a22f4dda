#include "ovid/stages.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <sstream>

#include "ovid/baselines.hpp"
#include "ovid/error.hpp"
#include "ovid/hash.hpp"
#include "ovid/history.hpp"
#include "ovid/labeling.hpp"
#include "ovid/manifest.hpp"
#include "ovid/metrics.hpp"
#include "ovid/model_io.hpp"
#include "ovid/osm_xml.hpp"
#include "ovid/trainer.hpp"

namespace ovid {

namespace fs = std::filesystem;

namespace {

constexpr std::size_t top_attended_edits = 3;

void note(const StageOptions& options, const std::string& message) {
    if (options.log != nullptr) {
        *options.log << message << '\n';
    }
}

std::string display_path(const fs::path& file, const fs::path& output_dir) {
    return file.lexically_proximate(output_dir).generic_string();
}

FileEntry entry_for(const fs::path& file, const fs::path& output_dir) {
    return FileEntry{display_path(file, output_dir), file_hash(file)};
}

PipelineManifest new_manifest(const StageOptions& options, const std::string& stage) {
    PipelineManifest m;
    m.stage = stage;
    m.seed = options.config.seed;
    m.config_hash = options.config.hash();
    m.tool_version = tool_version();
    return m;
}

void set_data_range(PipelineManifest& m, const HistoryStore& store) {
    if (store.changesets().empty()) {
        return;
    }
    Timestamp lo = store.changesets().begin()->second.commit_time;
    Timestamp hi = lo;
    for (const auto& [id, c] : store.changesets()) {
        lo = std::min(lo, c.commit_time);
        hi = std::max(hi, c.commit_time);
    }
    m.data_start = lo.to_iso();
    m.data_end = hi.to_iso();
}

void finish(const StageOptions& options, PipelineManifest& m, const std::vector<fs::path>& outputs) {
    for (const fs::path& out : outputs) {
        m.outputs.push_back(entry_for(out, options.output_dir));
    }
    write_manifest(options.output_dir, m);
    note(options, m.stage + ": wrote " + std::to_string(outputs.size()) + " file(s) to " + options.output_dir.string());
}

struct ParsedInputs {
    std::vector<Changeset> changesets;
    Json stats = Json::object();
};

bool is_osmchange(std::string_view document) {
    const auto pos = document.find("<osmChange");
    return pos != std::string_view::npos && pos < 1024;
}

ParsedInputs parse_inputs(const std::vector<fs::path>& inputs) {
    if (inputs.empty()) {
        throw DataError("no input files given (use --input)");
    }
    ParsedInputs parsed;
    std::vector<ChangeEntry> entries;
    std::size_t skipped_metadata = 0;
    std::size_t skipped_unknown = 0;
    std::size_t skipped_invalid = 0;
    bool have_metadata = false;
    for (const fs::path& path : inputs) {
        const std::string doc = read_file(path);
        if (is_osmchange(doc)) {
            OsmChange change = parse_osmchange(doc);
            skipped_unknown += change.skipped_unknown;
            skipped_invalid += change.skipped_invalid;
            entries.insert(entries.end(), change.entries.begin(), change.entries.end());
        } else {
            ChangesetDump dump = parse_changeset_metadata(doc);
            have_metadata = true;
            skipped_metadata += dump.skipped_missing_attribute;
            for (Changeset& c : dump.changesets) {
                parsed.changesets.push_back(std::move(c));
            }
        }
    }
    if (!have_metadata) {
        throw DataError("no changeset metadata among the inputs; osmChange files alone carry no authors");
    }
    const AttachReport report = attach_edits(parsed.changesets, entries);
    parsed.stats = Json{{"changesets", parsed.changesets.size()},
                        {"edits", entries.size() - report.orphan_edits},
                        {"skipped_changesets_missing_attribute", skipped_metadata},
                        {"skipped_unknown_elements", skipped_unknown},
                        {"skipped_invalid_elements", skipped_invalid},
                        {"orphan_edits", report.orphan_edits},
                        {"commit_time_adjusted", report.commit_time_adjusted}};
    return parsed;
}

std::string jsonl(const std::vector<Json>& rows) {
    std::string out;
    for (const Json& row : rows) {
        out += row.dump();
        out += '\n';
    }
    return out;
}

std::map<ChangesetId, Split> read_split_file(const fs::path& path) {
    std::map<ChangesetId, Split> splits;
    std::istringstream in(read_file(path));
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        try {
            const Json row = Json::parse(line);
            const auto split = parse_split(row.at("split").get<std::string>());
            if (!split) {
                throw DataError(path.string() + ":" + std::to_string(line_no) + ": unknown split");
            }
            splits.emplace(row.at("changeset_id").get<ChangesetId>(), *split);
        } catch (const Json::exception& e) {
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return splits;
}

LabeledDataset read_dataset(const fs::path& dir, const PipelineConfig& config) {
    std::istringstream in(read_file(dir / labels_file));
    LabeledDataset dataset = read_labels_jsonl(in);
    dataset.seed = config.seed;
    dataset.ratios = config.ratios;
    if (fs::exists(dir / split_file)) {
        dataset.splits = read_split_file(dir / split_file);
    }
    return dataset;
}

std::vector<FeatureRecord> read_records(const fs::path& path) {
    std::istringstream in(read_file(path));
    return read_feature_records(in);
}

FeatureLayout read_layout(const fs::path& path, std::string* declared_hash = nullptr) {
    Json value;
    try {
        value = Json::parse(read_file(path));
    } catch (const Json::exception& e) {
        throw DataError("unreadable feature manifest " + path.string() + ": " + e.what());
    }
    try {
        if (value.value("schema_version", 0) != manifest_schema_version) {
            throw CompatibilityError("feature manifest " + path.string() + " has an unsupported schema version");
        }
        FeatureLayout layout = FeatureLayout::from_json(value.at("layout"));
        if (declared_hash != nullptr) {
            *declared_hash = value.at("layout_hash").get<std::string>();
        }
        return layout;
    } catch (const Json::exception& e) {
        throw CompatibilityError("malformed feature manifest " + path.string() + ": " + e.what());
    }
}

Scaler read_scaler(const fs::path& path) {
    try {
        return scaler_from_json(Json::parse(read_file(path)));
    } catch (const Json::exception& e) {
        throw CompatibilityError("malformed scaler file " + path.string() + ": " + e.what());
    }
}

std::vector<Example> examples_for(const std::vector<FeatureRecord>& records, const Scaler& scaler,
                                  const ModelConfig& config, std::optional<Split> split) {
    std::vector<Example> out;
    for (const FeatureRecord& r : records) {
        if (split && r.split != split) {
            continue;
        }
        Example ex = make_example(apply_scaler(scaler, r), config);
        ex.target = r.label == Label::Vandalism ? 1.0 : 0.0;
        out.push_back(std::move(ex));
    }
    return out;
}

ModelConfig training_config(const PipelineConfig& config, const FeatureLayout& layout) {
    ModelConfig model = config.model;
    if (!config.model_seed_from_config) {
        model.seed = config.seed;
    }
    model.adopt_layout(layout);
    return model;
}

Json attention_json(const std::vector<std::vector<double>>& attention) {
    Json heads = Json::array();
    for (const auto& head : attention) {
        heads.push_back(head);
    }
    return heads;
}

/// Edit indices by mean attention across heads, highest first.
std::vector<std::pair<std::size_t, double>> top_edits(const std::vector<std::vector<double>>& attention,
                                                      std::size_t k) {
    if (attention.empty()) {
        return {};
    }
    const std::size_t n = attention.front().size();
    std::vector<std::pair<std::size_t, double>> mean(n);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (const auto& head : attention) {
            sum += head[i];
        }
        mean[i] = {i, sum / static_cast<double>(attention.size())};
    }
    std::stable_sort(mean.begin(), mean.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    mean.resize(std::min(k, n));
    return mean;
}

struct Scorer {
    ModelBundle bundle;
    FeatureLayout layout;
};

/// Loads the model and feature manifest and checks they belong together.
Scorer load_scorer(const StageOptions& options) {
    const fs::path dir = options.source_dir();
    const fs::path model_path = options.model.empty() ? dir / model_file : options.model;
    const fs::path layout_path = options.feature_manifest.empty() ? dir / feature_manifest_file : options.feature_manifest;
    Scorer s;
    s.bundle = load_model(model_path);
    std::string declared;
    s.layout = read_layout(layout_path, &declared);
    if (declared != s.layout.hash()) {
        throw CompatibilityError("feature manifest " + layout_path.string() + " declares hash " + declared +
                                 " but its layout hashes to " + s.layout.hash() + "; re-run `ovid featurize`");
    }
    require_layout(s.bundle, s.layout);
    return s;
}

std::vector<FeatureRecord> featurize_changesets(const HistoryStore& store, const FeatureLayout& layout,
                                                std::span<const Changeset> changesets, std::size_t threads) {
    const Featurizer featurizer(store, layout.config, layout.editors);
    return featurize(featurizer, changesets, threads);
}

} // namespace

// ---- stages ------------------------------------------------------------

void run_ingest(const StageOptions& options) {
    ParsedInputs parsed = parse_inputs(options.inputs);
    const HistoryStore store = HistoryStore::build(std::move(parsed.changesets));
    fs::create_directories(options.output_dir);
    save_snapshot(store, options.output_dir);

    PipelineManifest m = new_manifest(options, "ingest");
    for (const fs::path& in : options.inputs) {
        m.inputs.push_back(FileEntry{in.generic_string(), file_hash(in)});
    }
    set_data_range(m, store);
    m.stats = parsed.stats;
    m.stats["objects"] = store.object_index().size();
    m.stats["users"] = store.user_index().size();
    finish(options, m, {options.output_dir / snapshot_records_file, options.output_dir / snapshot_index_file});
}

void run_label(const StageOptions& options) {
    const fs::path dir = options.source_dir();
    const std::string hash = options.config.hash();
    require_manifest(dir, "ingest", hash);
    const HistoryStore store = load_snapshot(dir);
    const LabeledDataset dataset = build_labels(store, options.config.seed, options.config.ratios);
    for (const std::string& w : dataset.warnings) {
        note(options, "label: warning: " + w);
    }

    std::ostringstream labels;
    write_labels_jsonl(labels, dataset);
    write_file(options.output_dir / labels_file, labels.str());
    write_file(options.output_dir / labels_manifest_file, labels_manifest(dataset).dump(2) + "\n");

    PipelineManifest m = new_manifest(options, "label");
    m.inputs.push_back(entry_for(dir / snapshot_records_file, options.output_dir));
    set_data_range(m, store);
    m.stats = Json{{"examples", dataset.labels.size()}, {"warnings", dataset.warnings.size()}};
    finish(options, m, {options.output_dir / labels_file, options.output_dir / labels_manifest_file});
}

void run_split(const StageOptions& options) {
    const fs::path dir = options.source_dir();
    const std::string hash = options.config.hash();
    require_manifest(dir, "label", hash);
    const HistoryStore store = load_snapshot(dir);
    std::istringstream in(read_file(dir / labels_file));
    LabeledDataset dataset = read_labels_jsonl(in);
    dataset.seed = options.config.seed;
    dataset.ratios = options.config.ratios;

    const SplitAssignment assignment =
        split_user_disjoint(dataset.labels, store, options.config.ratios, options.config.seed);
    dataset.splits = assignment.splits;
    dataset.warnings = assignment.warnings;

    std::vector<Json> rows;
    for (const auto& [id, split] : assignment.splits) {
        rows.push_back(Json{{"changeset_id", id}, {"split", std::string(to_string(split))}});
    }
    write_file(options.output_dir / split_file, jsonl(rows));
    write_file(options.output_dir / split_manifest_file, labels_manifest(dataset).dump(2) + "\n");

    PipelineManifest m = new_manifest(options, "split");
    m.inputs.push_back(entry_for(dir / labels_file, options.output_dir));
    set_data_range(m, store);
    m.stats = Json{{"train", assignment.counts[0]},
                   {"validation", assignment.counts[1]},
                   {"test", assignment.counts[2]}};
    finish(options, m, {options.output_dir / split_file, options.output_dir / split_manifest_file});
}

void run_featurize(const StageOptions& options) {
    const fs::path dir = options.source_dir();
    const std::string hash = options.config.hash();
    require_manifest(dir, "split", hash);
    const HistoryStore store = load_snapshot(dir);
    const LabeledDataset dataset = read_dataset(dir, options.config);

    const FeatureSet set = build_feature_set(store, dataset, options.config.features, options.threads);
    std::vector<FeatureRecord> train;
    std::copy_if(set.records.begin(), set.records.end(), std::back_inserter(train),
                 [](const FeatureRecord& r) { return r.split == Split::Train; });
    const Scaler scaler = fit_scaler(train, set.layout);

    std::ostringstream records;
    write_feature_records(records, set.records);
    write_file(options.output_dir / features_file, records.str());
    const Json layout_doc{{"schema_version", manifest_schema_version},
                          {"layout_hash", set.layout.hash()},
                          {"layout", set.layout.to_json()}};
    write_file(options.output_dir / feature_manifest_file, layout_doc.dump(2) + "\n");
    write_file(options.output_dir / scaler_file, to_json(scaler).dump(2) + "\n");

    PipelineManifest m = new_manifest(options, "featurize");
    m.inputs.push_back(entry_for(dir / labels_file, options.output_dir));
    m.inputs.push_back(entry_for(dir / split_file, options.output_dir));
    set_data_range(m, store);
    m.stats = Json{{"records", set.records.size()}, {"train_records", train.size()}, {"layout_hash", set.layout.hash()}};
    finish(options, m,
           {options.output_dir / features_file, options.output_dir / feature_manifest_file,
            options.output_dir / scaler_file});
}

void run_train(const StageOptions& options) {
    const fs::path dir = options.source_dir();
    const std::string hash = options.config.hash();
    const PipelineManifest upstream = require_manifest(dir, "featurize", hash);
    const FeatureLayout layout = read_layout(dir / feature_manifest_file);
    const Scaler scaler = read_scaler(dir / scaler_file);
    const std::vector<FeatureRecord> records = read_records(dir / features_file);
    const ModelConfig config = training_config(options.config, layout);

    const std::vector<Example> train_set = examples_for(records, scaler, config, Split::Train);
    const std::vector<Example> validation_set = examples_for(records, scaler, config, Split::Validation);
    note(options, "train: " + std::to_string(train_set.size()) + " training and " +
                      std::to_string(validation_set.size()) + " validation examples");
    const TrainingResult result = train(config, train_set, validation_set);

    ModelBundle bundle{config, result.params, scaler, layout.hash(), result.threshold};
    save_model(options.output_dir / model_file, bundle);
    write_file(options.output_dir / training_log_file, to_json(result, config).dump(2) + "\n");

    PipelineManifest m = new_manifest(options, "train");
    m.inputs.push_back(entry_for(dir / features_file, options.output_dir));
    m.inputs.push_back(entry_for(dir / scaler_file, options.output_dir));
    m.data_start = upstream.data_start;
    m.data_end = upstream.data_end;
    m.stats = Json{{"best_epoch", result.best_epoch},
                   {"epochs_run", result.log.size()},
                   {"best_validation_f1", result.best_validation_f1},
                   {"threshold", result.threshold}};
    finish(options, m, {options.output_dir / model_file, options.output_dir / training_log_file});
}

void run_eval(const StageOptions& options) {
    const fs::path dir = options.source_dir();
    const std::string hash = options.config.hash();
    require_manifest(dir, "train", hash);
    const PipelineManifest upstream = require_manifest(dir, "featurize", hash);
    const HistoryStore store = load_snapshot(dir);
    const Scorer scorer = load_scorer(options);
    const std::vector<FeatureRecord> records = read_records(dir / features_file);

    std::map<ChangesetId, Label> truth;
    std::vector<ChangesetId> ids;
    std::vector<Prediction> ovid_predictions;
    for (const FeatureRecord& r : records) {
        if (r.split != Split::Test || !r.label) {
            continue;
        }
        truth.emplace(r.changeset_id, *r.label);
        ids.push_back(r.changeset_id);
        const Example ex = make_example(apply_scaler(scorer.bundle.scaler, r), scorer.bundle.config);
        const ChangesetPrediction p = predict(scorer.bundle.params, scorer.bundle.config, ex, scorer.bundle.threshold);
        ovid_predictions.push_back(Prediction{r.changeset_id, p.label == Label::Vandalism, p.probability, {}});
    }
    if (ids.empty()) {
        throw DataError("the test split is empty; adjust the split ratios or add data");
    }

    std::vector<const Changeset*> changesets;
    for (ChangesetId id : ids) {
        const Changeset* c = store.find_changeset(id);
        if (c == nullptr) {
            throw DataError("changeset " + std::to_string(id) + " is labeled but missing from the history store");
        }
        changesets.push_back(c);
    }
    const std::vector<Prediction> rule_predictions = rule_baseline(changesets, store, options.config.rules);
    const std::vector<Prediction> random_predictions = random_baseline(ids, options.config.seed);

    const std::vector<std::pair<std::string, EvalReport>> rows{
        {"OVID", evaluate(ovid_predictions, truth)},
        {"Rule baseline", evaluate(rule_predictions, truth)},
        {"Random baseline", evaluate(random_predictions, truth)},
    };
    Json methods = Json::object();
    for (const auto& [name, report] : rows) {
        methods[name] = to_json(report);
    }
    const Json doc{{"split", "test"},
                   {"examples", ids.size()},
                   {"threshold", scorer.bundle.threshold},
                   {"methods", std::move(methods)}};
    write_file(options.output_dir / eval_json_file, doc.dump(2) + "\n");
    write_file(options.output_dir / eval_table_file, render_table(rows));
    note(options, render_table(rows));

    PipelineManifest m = new_manifest(options, "eval");
    m.inputs.push_back(entry_for(dir / model_file, options.output_dir));
    m.inputs.push_back(entry_for(dir / features_file, options.output_dir));
    m.data_start = upstream.data_start;
    m.data_end = upstream.data_end;
    m.stats = Json{{"test_examples", ids.size()}};
    finish(options, m, {options.output_dir / eval_json_file, options.output_dir / eval_table_file});
}

void run_predict(const StageOptions& options) {
    const fs::path out_path = options.output_dir / predictions_file;
    Scorer scorer;
    try {
        scorer = load_scorer(options);
    } catch (const CompatibilityError&) {
        fs::remove(out_path);
        throw;
    }
    const fs::path dir = options.source_dir();
    const HistoryStore store = load_snapshot(dir);
    ParsedInputs parsed = parse_inputs(options.inputs);
    std::sort(parsed.changesets.begin(), parsed.changesets.end(),
              [](const Changeset& a, const Changeset& b) { return a.id < b.id; });
    const std::vector<FeatureRecord> records =
        featurize_changesets(store, scorer.layout, parsed.changesets, options.threads);

    std::vector<Json> rows;
    for (const FeatureRecord& r : records) {
        const Example ex = make_example(apply_scaler(scorer.bundle.scaler, r), scorer.bundle.config);
        const ChangesetPrediction p = predict(scorer.bundle.params, scorer.bundle.config, ex, scorer.bundle.threshold);
        rows.push_back(Json{{"changeset_id", p.changeset_id},
                            {"label", std::string(to_string(p.label))},
                            {"probability", p.probability},
                            {"attention", attention_json(p.attention)}});
    }
    fs::create_directories(options.output_dir);
    write_file(out_path, jsonl(rows));

    PipelineManifest m = new_manifest(options, "predict");
    for (const fs::path& in : options.inputs) {
        m.inputs.push_back(FileEntry{in.generic_string(), file_hash(in)});
    }
    m.stats = Json{{"changesets", rows.size()}, {"layout_hash", scorer.bundle.layout_hash}};
    finish(options, m, {out_path});
}

void run_report(const StageOptions& options) {
    const fs::path dir = options.source_dir();
    const Scorer scorer = load_scorer(options);
    const HistoryStore store = load_snapshot(dir);

    std::vector<Changeset> changesets;
    std::map<ChangesetId, std::pair<Label, std::optional<Split>>> known;
    if (!options.inputs.empty()) {
        changesets = parse_inputs(options.inputs).changesets;
    } else {
        const LabeledDataset dataset = read_dataset(dir, options.config);
        for (const VandalismLabel& l : dataset.labels) {
            const Changeset* c = store.find_changeset(l.changeset_id);
            if (c == nullptr) {
                throw DataError("changeset " + std::to_string(l.changeset_id) + " is labeled but not in the store");
            }
            changesets.push_back(*c);
            const auto split = dataset.splits.find(l.changeset_id);
            known.emplace(l.changeset_id,
                          std::pair{l.label, split == dataset.splits.end() ? std::nullopt : std::optional(split->second)});
        }
    }
    std::sort(changesets.begin(), changesets.end(), [](const Changeset& a, const Changeset& b) { return a.id < b.id; });
    const std::vector<FeatureRecord> records = featurize_changesets(store, scorer.layout, changesets, options.threads);

    std::vector<Json> rows;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const Changeset& c = changesets[i];
        const Example ex = make_example(apply_scaler(scorer.bundle.scaler, records[i]), scorer.bundle.config);
        const ChangesetPrediction p = predict(scorer.bundle.params, scorer.bundle.config, ex, scorer.bundle.threshold);
        Json top = Json::array();
        for (const auto& [index, weight] : top_edits(p.attention, top_attended_edits)) {
            const Edit& e = c.edits[index];
            top.push_back(Json{{"index", index},
                               {"op", std::string(to_string(e.operation))},
                               {"kind", std::string(to_string(e.object.kind))},
                               {"id", e.object.id},
                               {"version", e.new_version},
                               {"weight", weight}});
        }
        Json row{{"changeset_id", c.id},
                 {"user", c.user_name},
                 {"comment", c.comment},
                 {"edits", c.edits.size()},
                 {"probability", p.probability},
                 {"label", std::string(to_string(p.label))},
                 {"fired_rules", fired_rules(c, store, options.config.rules)},
                 {"edit_branch_cut", edit_branch_cut(c.edits.size(), scorer.bundle.config)},
                 {"top_attended_edits", std::move(top)}};
        if (const auto it = known.find(c.id); it != known.end()) {
            row["actual"] = std::string(to_string(it->second.first));
            row["split"] = it->second.second ? Json(std::string(to_string(*it->second.second))) : Json(nullptr);
        }
        rows.push_back(std::move(row));
    }
    fs::create_directories(options.output_dir);
    write_file(options.output_dir / report_file, jsonl(rows));

    PipelineManifest m = new_manifest(options, "report");
    for (const fs::path& in : options.inputs) {
        m.inputs.push_back(FileEntry{in.generic_string(), file_hash(in)});
    }
    m.inputs.push_back(entry_for(options.model.empty() ? dir / model_file : options.model, options.output_dir));
    set_data_range(m, store);
    m.stats = Json{{"changesets", rows.size()}};
    finish(options, m, {options.output_dir / report_file});
}

void run_pipeline(const StageOptions& options) {
    run_ingest(options);
    StageOptions next = options;
    next.input_dir = options.output_dir;
    run_label(next);
    run_split(next);
    run_featurize(next);
    run_train(next);
    run_eval(next);
}

} // namespace ovid
