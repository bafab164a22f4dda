// ovid: command-line driver for the vandalism detection pipeline.

#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "ovid/error.hpp"
#include "ovid/manifest.hpp"
#include "ovid/stages.hpp"

namespace {

enum ExitCode { ok = 0, usage = 1, data_error = 2, compatibility_error = 3 };

struct Flags {
    std::vector<std::string> inputs;
    std::string output_dir = ".";
    std::string input_dir;
    std::string config;
    std::string model;
    std::string feature_manifest;
    std::uint64_t seed = 42;
    std::size_t threads = 1;
    bool quiet = false;
};

void add_common(CLI::App* cmd, Flags& flags) {
    cmd->add_option("--output-dir,-o", flags.output_dir, "Directory for this stage's outputs")->capture_default_str();
    cmd->add_option("--seed", flags.seed, "Seed for every stochastic stage")->capture_default_str();
    cmd->add_option("--config", flags.config, "JSON config file")->check(CLI::ExistingFile);
    cmd->add_option("--threads", flags.threads, "Worker threads (0 = hardware concurrency)")->capture_default_str();
    cmd->add_flag("--quiet,-q", flags.quiet, "Suppress progress messages");
}

ovid::StageOptions to_options(const Flags& flags) {
    ovid::StageOptions options;
    options.output_dir = flags.output_dir;
    options.input_dir = flags.input_dir;
    for (const std::string& in : flags.inputs) {
        options.inputs.emplace_back(in);
    }
    options.model = flags.model;
    options.feature_manifest = flags.feature_manifest;
    options.config = flags.config.empty() ? ovid::PipelineConfig::from_json(ovid::Json::object(), flags.seed)
                                          : ovid::PipelineConfig::load(flags.config, flags.seed);
    options.threads = flags.threads == 0 ? std::max(1U, std::thread::hardware_concurrency()) : flags.threads;
    options.log = flags.quiet ? nullptr : &std::cerr;
    return options;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Detect vandalism in OpenStreetMap changesets"};
    app.set_version_flag("--version", ovid::tool_version());
    app.require_subcommand(1);
    Flags flags;

    using Stage = void (*)(const ovid::StageOptions&);
    struct Command {
        const char* name;
        const char* help;
        Stage run;
        bool xml_input;
        bool xml_required;
    };
    const Command commands[] = {
        {"ingest", "Parse changeset XML and osmChange files into a history store", ovid::run_ingest, true, true},
        {"label", "Mine revert changesets for vandalism labels", ovid::run_label, false, false},
        {"split", "Assign labeled changesets to user-disjoint splits", ovid::run_split, false, false},
        {"featurize", "Compute changeset, user and edit features", ovid::run_featurize, false, false},
        {"train", "Train the classifier", ovid::run_train, false, false},
        {"eval", "Compare the classifier with the baselines on the test split", ovid::run_eval, false, false},
        {"predict", "Score new changesets with a saved model", ovid::run_predict, true, true},
        {"report", "Explain predictions per changeset", ovid::run_report, true, false},
        {"run", "Run ingest through eval", ovid::run_pipeline, true, true},
    };

    Stage selected = nullptr;
    for (const Command& c : commands) {
        CLI::App* cmd = app.add_subcommand(c.name, c.help);
        add_common(cmd, flags);
        if (c.xml_input) {
            auto* opt = cmd->add_option("--input,-i", flags.inputs, "Changeset metadata and osmChange XML files")
                            ->check(CLI::ExistingFile);
            if (c.xml_required) {
                opt->required();
            }
        }
        if (!c.xml_input) {
            cmd->add_option("--input,-i", flags.input_dir, "Directory holding earlier stages' outputs (default: output dir)")
                ->check(CLI::ExistingDirectory);
        }
        if (std::string_view(c.name) == "predict" || std::string_view(c.name) == "report") {
            cmd->add_option("--from", flags.input_dir, "Directory holding the history store and model (default: output dir)")
                ->check(CLI::ExistingDirectory);
            cmd->add_option("--model", flags.model, "Model file (default: model.json in --from)")
                ->check(CLI::ExistingFile);
            cmd->add_option("--feature-manifest", flags.feature_manifest,
                            "Feature manifest (default: feature_manifest.json in --from)")
                ->check(CLI::ExistingFile);
        }
        cmd->callback([&selected, run = c.run] { selected = run; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : usage;
    }

    try {
        selected(to_options(flags));
    } catch (const ovid::CompatibilityError& e) {
        std::cerr << "ovid: incompatible input: " << e.what() << '\n';
        return compatibility_error;
    } catch (const ovid::DataError& e) {
        std::cerr << "ovid: data error: " << e.what() << '\n';
        return data_error;
    } catch (const std::invalid_argument& e) {
        std::cerr << "ovid: invalid setting: " << e.what() << '\n';
        return usage;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "ovid: " << e.what() << '\n';
        return data_error;
    }
    return ok;
}
