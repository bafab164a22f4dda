#include "ovid/model_io.hpp"

#include <fstream>

#include "ovid/error.hpp"

namespace ovid {

Json params_to_json(const OvidParams& params) {
    Json out = Json::object();
    params.for_each([&out](const std::string& name, const Matrix& m) {
        Json data = Json::array();
        for (double v : m.data()) {
            data.push_back(v);
        }
        out[name] = Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
    });
    return out;
}

OvidParams params_from_json(const Json& value, const ModelConfig& config) {
    OvidParams params = OvidParams::zeros(config);
    std::size_t seen = 0;
    params.for_each([&](const std::string& name, Matrix& m) {
        if (!value.contains(name)) {
            throw CompatibilityError("model file lacks parameter '" + name + "'");
        }
        const Json& entry = value.at(name);
        const auto rows = entry.at("rows").get<std::size_t>();
        const auto cols = entry.at("cols").get<std::size_t>();
        const Json& data = entry.at("data");
        if (rows != m.rows() || cols != m.cols() || data.size() != m.size()) {
            throw CompatibilityError("parameter '" + name + "' has shape " + std::to_string(rows) + "x" +
                                     std::to_string(cols) + ", config expects " + std::to_string(m.rows()) + "x" +
                                     std::to_string(m.cols()));
        }
        auto dst = m.data();
        for (std::size_t i = 0; i < dst.size(); ++i) {
            dst[i] = data[i].get<double>();
        }
        ++seen;
    });
    if (seen != value.size()) {
        throw CompatibilityError("model file has parameters the config does not describe");
    }
    return params;
}

Json to_json(const ModelBundle& bundle) {
    return Json{{"schema_version", model_schema_version},
                {"feature_layout_hash", bundle.layout_hash},
                {"threshold", bundle.threshold},
                {"config", to_json(bundle.config)},
                {"scaler", to_json(bundle.scaler)},
                {"params", params_to_json(bundle.params)}};
}

ModelBundle model_bundle_from_json(const Json& value) {
    try {
        const int version = value.at("schema_version").get<int>();
        if (version != model_schema_version) {
            throw CompatibilityError("model schema version " + std::to_string(version) + " is not supported (expected " +
                                     std::to_string(model_schema_version) + ")");
        }
        ModelBundle bundle;
        bundle.config = model_config_from_json(value.at("config"));
        bundle.config.validate();
        bundle.layout_hash = value.at("feature_layout_hash").get<std::string>();
        bundle.threshold = value.at("threshold").get<double>();
        bundle.scaler = scaler_from_json(value.at("scaler"));
        bundle.params = params_from_json(value.at("params"), bundle.config);
        return bundle;
    } catch (const Json::exception& e) {
        throw CompatibilityError(std::string("unreadable model file: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw CompatibilityError(std::string("model file has an invalid config: ") + e.what());
    }
}

void save_model(const std::filesystem::path& path, const ModelBundle& bundle) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot write " + path.string());
    }
    out << to_json(bundle).dump(1) << '\n';
}

ModelBundle load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot read model file " + path.string());
    }
    Json value;
    try {
        value = Json::parse(in);
    } catch (const Json::exception& e) {
        throw CompatibilityError("model file " + path.string() + " is not valid JSON: " + e.what());
    }
    return model_bundle_from_json(value);
}

void require_layout(const ModelBundle& bundle, const FeatureLayout& layout) {
    const std::string actual = layout.hash();
    if (actual != bundle.layout_hash) {
        throw CompatibilityError("feature layout hash " + actual + " does not match the model's " + bundle.layout_hash +
                                 "; re-run featurize and train with the same feature configuration");
    }
}

} // namespace ovid
