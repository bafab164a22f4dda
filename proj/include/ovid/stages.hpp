#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "ovid/pipeline_config.hpp"

namespace ovid {

// Artifact names inside an output directory.
inline constexpr const char* labels_file = "labels.jsonl";
inline constexpr const char* labels_manifest_file = "labels_manifest.json";
inline constexpr const char* split_file = "split.jsonl";
inline constexpr const char* split_manifest_file = "split_manifest.json";
inline constexpr const char* features_file = "features.jsonl";
inline constexpr const char* feature_manifest_file = "feature_manifest.json";
inline constexpr const char* scaler_file = "scaler.json";
inline constexpr const char* model_file = "model.json";
inline constexpr const char* training_log_file = "training_log.json";
inline constexpr const char* eval_json_file = "eval.json";
inline constexpr const char* eval_table_file = "eval.txt";
inline constexpr const char* predictions_file = "predictions.jsonl";
inline constexpr const char* report_file = "report.jsonl";

struct StageOptions {
    std::filesystem::path output_dir = ".";
    /// Where earlier stages' artifacts live; empty means output_dir.
    std::filesystem::path input_dir;
    /// XML inputs: changeset metadata dumps and osmChange files (detected by
    /// root element). Used by ingest, predict and report.
    std::vector<std::filesystem::path> inputs;
    /// Overrides for predict and report; empty means the files in input_dir.
    std::filesystem::path model;
    std::filesystem::path feature_manifest;
    PipelineConfig config;
    std::size_t threads = 1;
    std::ostream* log = nullptr;

    const std::filesystem::path& source_dir() const { return input_dir.empty() ? output_dir : input_dir; }
};

void run_ingest(const StageOptions& options);
void run_label(const StageOptions& options);
void run_split(const StageOptions& options);
void run_featurize(const StageOptions& options);
void run_train(const StageOptions& options);
void run_eval(const StageOptions& options);
void run_predict(const StageOptions& options);
void run_report(const StageOptions& options);

/// ingest through eval in one go.
void run_pipeline(const StageOptions& options);

} // namespace ovid
