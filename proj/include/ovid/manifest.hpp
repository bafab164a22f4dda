#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ovid/osm_json.hpp"

namespace ovid {

inline constexpr int manifest_schema_version = 1;

struct FileEntry {
    std::string path; // relative to the output directory for stage outputs
    std::string hash;
};

/// Written next to every stage's outputs as `<stage>.manifest.json`. Times
/// come from the data, never the wall clock, so reruns are byte-identical.
struct PipelineManifest {
    std::string stage;
    std::vector<FileEntry> inputs;
    std::vector<FileEntry> outputs;
    std::uint64_t seed = 0;
    std::string config_hash;
    std::string tool_version;
    std::optional<std::string> data_start;
    std::optional<std::string> data_end;
    Json stats = Json::object();

    Json to_json() const;
    static PipelineManifest from_json(const Json& value);
};

std::string tool_version();

std::string file_hash(const std::filesystem::path& path);

/// Writes via a temporary file and rename.
void write_file(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

std::filesystem::path manifest_path(const std::filesystem::path& dir, const std::string& stage);
void write_manifest(const std::filesystem::path& dir, const PipelineManifest& manifest);

/// Loads the manifest of an earlier stage and checks that it was produced
/// with the same configuration. Throws DataError when missing,
/// CompatibilityError on a schema or config hash mismatch.
PipelineManifest require_manifest(const std::filesystem::path& dir, const std::string& stage,
                                  const std::string& config_hash);

} // namespace ovid
