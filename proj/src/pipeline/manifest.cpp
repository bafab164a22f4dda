#include "ovid/manifest.hpp"

#include <fstream>
#include <sstream>

#include "ovid/error.hpp"
#include "ovid/hash.hpp"

namespace ovid {

namespace {

Json files_json(const std::vector<FileEntry>& files) {
    Json out = Json::array();
    for (const FileEntry& f : files) {
        out.push_back(Json{{"path", f.path}, {"hash", f.hash}});
    }
    return out;
}

std::vector<FileEntry> files_from_json(const Json& value) {
    std::vector<FileEntry> out;
    for (const Json& f : value) {
        out.push_back(FileEntry{f.at("path").get<std::string>(), f.at("hash").get<std::string>()});
    }
    return out;
}

Json optional_string(const std::optional<std::string>& s) { return s ? Json(*s) : Json(nullptr); }

} // namespace

Json PipelineManifest::to_json() const {
    return Json{{"schema_version", manifest_schema_version},
                {"stage", stage},
                {"tool_version", tool_version},
                {"seed", seed},
                {"config_hash", config_hash},
                {"data_start", optional_string(data_start)},
                {"data_end", optional_string(data_end)},
                {"inputs", files_json(inputs)},
                {"outputs", files_json(outputs)},
                {"stats", stats}};
}

PipelineManifest PipelineManifest::from_json(const Json& value) {
    PipelineManifest m;
    m.stage = value.at("stage").get<std::string>();
    m.tool_version = value.at("tool_version").get<std::string>();
    m.seed = value.at("seed").get<std::uint64_t>();
    m.config_hash = value.at("config_hash").get<std::string>();
    if (!value.at("data_start").is_null()) {
        m.data_start = value.at("data_start").get<std::string>();
    }
    if (!value.at("data_end").is_null()) {
        m.data_end = value.at("data_end").get<std::string>();
    }
    m.inputs = files_from_json(value.at("inputs"));
    m.outputs = files_from_json(value.at("outputs"));
    m.stats = value.value("stats", Json::object());
    return m;
}

std::string tool_version() { return OVID_VERSION; }

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot read " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string file_hash(const std::filesystem::path& path) { return fingerprint(read_file(path)); }

void write_file(const std::filesystem::path& path, const std::string& contents) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw DataError("cannot write " + path.string());
        }
        out << contents;
        if (!out) {
            throw DataError("failed writing " + path.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

std::filesystem::path manifest_path(const std::filesystem::path& dir, const std::string& stage) {
    return dir / (stage + ".manifest.json");
}

void write_manifest(const std::filesystem::path& dir, const PipelineManifest& manifest) {
    write_file(manifest_path(dir, manifest.stage), manifest.to_json().dump(2) + "\n");
}

PipelineManifest require_manifest(const std::filesystem::path& dir, const std::string& stage,
                                  const std::string& config_hash) {
    const std::filesystem::path path = manifest_path(dir, stage);
    if (!std::filesystem::exists(path)) {
        throw DataError("missing " + path.string() + "; run `ovid " + stage + "` first");
    }
    Json value;
    try {
        value = Json::parse(read_file(path));
    } catch (const Json::exception& e) {
        throw DataError("unreadable manifest " + path.string() + ": " + e.what());
    }
    const int version = value.value("schema_version", 0);
    if (version != manifest_schema_version) {
        throw CompatibilityError(path.string() + " has schema version " + std::to_string(version) + ", expected " +
                                 std::to_string(manifest_schema_version) + "; re-run `ovid " + stage + "`");
    }
    PipelineManifest manifest;
    try {
        manifest = PipelineManifest::from_json(value);
    } catch (const Json::exception& e) {
        throw CompatibilityError("malformed manifest " + path.string() + ": " + e.what());
    }
    if (manifest.config_hash != config_hash) {
        throw CompatibilityError("config hash mismatch: " + path.string() + " was produced with config " +
                                 manifest.config_hash + " but this run uses " + config_hash +
                                 "; pass the same --config and --seed or re-run `ovid " + stage + "`");
    }
    for (const FileEntry& out : manifest.outputs) {
        const std::filesystem::path file = dir / out.path;
        if (!std::filesystem::exists(file)) {
            throw DataError("missing " + file.string() + " listed in " + path.string());
        }
        if (file_hash(file) != out.hash) {
            throw CompatibilityError(file.string() + " changed since `ovid " + stage + "` wrote it; re-run that stage");
        }
    }
    return manifest;
}

} // namespace ovid
