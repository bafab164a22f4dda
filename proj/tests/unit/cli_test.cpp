#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>

#include "ovid/manifest.hpp"
#include "ovid/pipeline_config.hpp"
#include "ovid/stages.hpp"

using namespace ovid;
namespace fs = std::filesystem;

namespace {

const std::string fixture = std::string(OVID_DATA_DIR) + "/fixtures/synthetic20/";
const std::string inputs = " -i " + fixture + "changesets.xml -i " + fixture + "osmchange.xml";

int run_cli(const std::string& args) {
    const std::string command = std::string(OVID_BINARY) + " " + args + " -q > /dev/null 2>&1";
    const int status = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path fresh(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("ovid_cli_" + name);
    fs::remove_all(dir);
    return dir;
}

// One full run shared by the tests below.
const fs::path& pipeline_dir() {
    static const fs::path dir = [] {
        const fs::path d = fresh("pipeline_" + std::to_string(::getpid()));
        if (run_cli("run" + inputs + " -o " + d.string()) != 0) {
            throw std::runtime_error("pipeline run failed");
        }
        return d;
    }();
    return dir;
}

} // namespace

TEST(Cli, FullRunProducesEveryArtifact) {
    const fs::path& dir = pipeline_dir();
    for (const char* file : {labels_file, split_file, features_file, scaler_file, model_file, eval_json_file}) {
        EXPECT_TRUE(fs::exists(dir / file)) << file;
    }
    const Json eval = Json::parse(read_file(dir / eval_json_file));
    EXPECT_TRUE(eval.is_object());
}

TEST(Cli, RerunIsByteIdentical) {
    const fs::path again = fresh("again");
    ASSERT_EQ(run_cli("run" + inputs + " -o " + again.string()), 0);
    for (const char* file : {labels_file, features_file, model_file, eval_json_file}) {
        EXPECT_EQ(read_file(pipeline_dir() / file), read_file(again / file)) << file;
    }
}

TEST(Cli, PredictAndReport) {
    const fs::path out = fresh("predict");
    ASSERT_EQ(run_cli("predict" + inputs + " --from " + pipeline_dir().string() + " -o " + out.string()), 0);
    EXPECT_TRUE(fs::exists(out / predictions_file));
    ASSERT_EQ(run_cli("report --from " + pipeline_dir().string() + " -o " + out.string()), 0);
    EXPECT_TRUE(fs::exists(out / report_file));
}

TEST(Cli, PredictRejectsForeignFeatureLayout) {
    const fs::path out = fresh("mismatch");
    fs::create_directories(out);
    Json manifest = Json::parse(read_file(pipeline_dir() / feature_manifest_file));
    manifest["layout_hash"] = "0000000000000000";
    const fs::path edited = out / "edited_manifest.json";
    write_file(edited, manifest.dump(2));
    EXPECT_EQ(run_cli("predict" + inputs + " --from " + pipeline_dir().string() + " --feature-manifest " +
                   edited.string() + " -o " + out.string()),
              3);
    EXPECT_FALSE(fs::exists(out / predictions_file));
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run_cli("--version"), 0);
    EXPECT_EQ(run_cli("frobnicate"), 1);
    EXPECT_EQ(run_cli("train --no-such-flag"), 1);
    EXPECT_EQ(run_cli("ingest -o " + fresh("noinput").string()), 1);

    const fs::path empty = fresh("empty");
    fs::create_directories(empty);
    EXPECT_EQ(run_cli("label -o " + empty.string()), 2);

    const fs::path bad_xml = fresh("badxml");
    fs::create_directories(bad_xml);
    write_file(bad_xml / "broken.xml", "<osm><changeset id=\"1\"");
    EXPECT_EQ(run_cli("ingest -i " + (bad_xml / "broken.xml").string() + " -o " + bad_xml.string()), 2);
}

TEST(Cli, ResumingWithAnotherSeedIsRejected) {
    const fs::path out = fresh("reseed");
    EXPECT_EQ(run_cli("train --seed 7 --input " + pipeline_dir().string() + " -o " + out.string()), 3);
    EXPECT_FALSE(fs::exists(out / model_file));
}

TEST(Cli, ManifestSchemaVersionIsChecked) {
    const fs::path copy = fresh("schema");
    fs::copy(pipeline_dir(), copy, fs::copy_options::recursive);
    const fs::path manifest = manifest_path(copy, "featurize");
    Json j = Json::parse(read_file(manifest));
    j["schema_version"] = 99;
    write_file(manifest, j.dump(2));
    EXPECT_EQ(run_cli("train -o " + copy.string()), 3);
}

TEST(PipelineConfig, HashCoversSeedAndSections) {
    const PipelineConfig a = PipelineConfig::from_json(Json::object(), 42);
    EXPECT_EQ(a.hash(), PipelineConfig::from_json(Json::object(), 42).hash());
    EXPECT_NE(a.hash(), PipelineConfig::from_json(Json::object(), 43).hash());
    const PipelineConfig b = PipelineConfig::from_json(Json{{"model", {{"hidden_dim", 16}}}}, 42);
    EXPECT_EQ(b.model.hidden_dim, 16U);
    EXPECT_NE(a.hash(), b.hash());
    EXPECT_EQ(PipelineConfig::from_json(a.to_json(), 42).hash(), a.hash());
}

TEST(Manifest, RoundTrip) {
    PipelineManifest m;
    m.stage = "label";
    m.inputs = {FileEntry{"a.jsonl", "0123456789abcdef"}};
    m.seed = 9;
    m.config_hash = "cafe";
    m.tool_version = tool_version();
    m.stats = Json{{"n", 3}};
    EXPECT_EQ(PipelineManifest::from_json(m.to_json()).to_json(), m.to_json());
}
