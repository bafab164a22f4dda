#include "ovid/pipeline_config.hpp"

#include <fstream>

#include "ovid/error.hpp"
#include "ovid/hash.hpp"

namespace ovid {

namespace {

SplitRatios ratios_from_json(const Json& value) {
    SplitRatios r;
    r.train = value.value("train", r.train);
    r.validation = value.value("validation", r.validation);
    r.test = value.value("test", r.test);
    for (double share : r.as_array()) {
        if (!(share >= 0.0)) {
            throw DataError("split ratios must be non-negative");
        }
    }
    if (r.train <= 0.0) {
        throw DataError("the train split ratio must be positive");
    }
    return r;
}

} // namespace

PipelineConfig PipelineConfig::from_json(const Json& value, std::uint64_t seed) {
    if (!value.is_object()) {
        throw DataError("config must be a JSON object");
    }
    PipelineConfig config;
    config.seed = seed;
    try {
        if (value.contains("labeling")) {
            config.ratios = ratios_from_json(value.at("labeling"));
        }
        if (value.contains("features")) {
            config.features = feature_config_from_json(value.at("features"));
        }
        config.model.seed = seed;
        if (value.contains("model")) {
            config.model = model_config_from_json(value.at("model"), config.model);
            config.model_seed_from_config = value.at("model").contains("seed");
        }
        config.model.validate();
        if (value.contains("rules")) {
            config.rules = rule_set_from_json(value.at("rules"));
        }
    } catch (const Json::exception& e) {
        throw DataError(std::string("invalid config: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw DataError(std::string("invalid model config: ") + e.what());
    }
    return config;
}

PipelineConfig PipelineConfig::load(const std::filesystem::path& path, std::uint64_t seed) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot read config file " + path.string());
    }
    Json value;
    try {
        value = Json::parse(in);
    } catch (const Json::exception& e) {
        throw DataError("config file " + path.string() + " is not valid JSON: " + e.what());
    }
    return from_json(value, seed);
}

Json PipelineConfig::to_json() const {
    return Json{{"seed", seed},
                {"labeling", Json{{"train", ratios.train}, {"validation", ratios.validation}, {"test", ratios.test}}},
                {"features", ovid::to_json(features)},
                {"model", ovid::to_json(model)},
                {"rules", ovid::to_json(rules)}};
}

std::string PipelineConfig::hash() const { return fingerprint(to_json().dump()); }

} // namespace ovid
