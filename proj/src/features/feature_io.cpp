#include <istream>
#include <ostream>

#include "ovid/error.hpp"
#include "ovid/features.hpp"
#include "ovid/hash.hpp"

namespace ovid {

Json to_json(const FeatureConfig& config) {
    return Json{{"top12_keys", config.top12_keys},
                {"valid_keys", config.valid_keys},
                {"editor_vocabulary_size", config.editor_vocabulary_size},
                {"count_current_author", config.count_current_author}};
}

FeatureConfig feature_config_from_json(const Json& value) {
    FeatureConfig config;
    if (value.contains("top12_keys")) {
        config.top12_keys = value.at("top12_keys").get<std::vector<std::string>>();
    }
    if (value.contains("valid_keys")) {
        config.valid_keys = value.at("valid_keys").get<std::vector<std::string>>();
    }
    config.editor_vocabulary_size = value.value("editor_vocabulary_size", config.editor_vocabulary_size);
    config.count_current_author = value.value("count_current_author", config.count_current_author);
    return config;
}

FeatureLayout FeatureLayout::make(const FeatureConfig& config, const EditorVocabulary& editors) {
    FeatureLayout layout;
    layout.changeset_dims = ChangesetFeatures::names();
    layout.user_dims = UserFeatures::names();
    layout.edit_dims = EditFeatures::names();
    layout.editor_dim = layout.changeset_dims.size() - 1;

    const auto flags = [](const std::vector<std::string>& dims, std::initializer_list<std::string_view> pass) {
        std::vector<bool> out;
        for (const std::string& d : dims) {
            out.push_back(std::find(pass.begin(), pass.end(), d) != pass.end());
        }
        return out;
    };
    layout.changeset_passthrough = flags(layout.changeset_dims, {"has_imagery", "editor_id"});
    layout.user_passthrough = flags(layout.user_dims, {});
    layout.edit_passthrough = flags(layout.edit_dims, {"kind_node", "kind_way", "kind_relation", "op_create",
                                                       "op_modify", "op_delete", "known_previous", "name_changed"});
    layout.editors = editors;
    layout.config = config;
    return layout;
}

Json FeatureLayout::to_json() const {
    return Json{{"changeset_dims", changeset_dims},
                {"user_dims", user_dims},
                {"edit_dims", edit_dims},
                {"changeset_passthrough", changeset_passthrough},
                {"user_passthrough", user_passthrough},
                {"edit_passthrough", edit_passthrough},
                {"editor_dim", editor_dim},
                {"editor_vocabulary", editors.names()},
                {"editor_slots", editors.slots()},
                {"config", ovid::to_json(config)}};
}

FeatureLayout FeatureLayout::from_json(const Json& value) {
    FeatureLayout layout;
    layout.changeset_dims = value.at("changeset_dims").get<std::vector<std::string>>();
    layout.user_dims = value.at("user_dims").get<std::vector<std::string>>();
    layout.edit_dims = value.at("edit_dims").get<std::vector<std::string>>();
    layout.changeset_passthrough = value.at("changeset_passthrough").get<std::vector<bool>>();
    layout.user_passthrough = value.at("user_passthrough").get<std::vector<bool>>();
    layout.edit_passthrough = value.at("edit_passthrough").get<std::vector<bool>>();
    layout.editor_dim = value.at("editor_dim").get<std::size_t>();
    layout.editors = EditorVocabulary(value.at("editor_vocabulary").get<std::vector<std::string>>(),
                                      value.at("editor_slots").get<std::size_t>() - 1);
    layout.config = feature_config_from_json(value.at("config"));
    return layout;
}

std::string FeatureLayout::hash() const { return fingerprint(to_json().dump()); }

Json to_json(const FeatureRecord& record) {
    return Json{{"changeset_id", record.changeset_id},
                {"label", record.label ? Json(to_string(*record.label)) : Json(nullptr)},
                {"split", record.split ? Json(to_string(*record.split)) : Json(nullptr)},
                {"x_c", record.x_c},
                {"x_u", record.x_u},
                {"m_e", record.m_e}};
}

FeatureRecord feature_record_from_json(const Json& value) {
    FeatureRecord record;
    record.changeset_id = value.at("changeset_id").get<ChangesetId>();
    if (const Json& label = value.at("label"); !label.is_null()) {
        record.label = parse_label(label.get<std::string>());
        if (!record.label) {
            throw DataError("unknown label '" + label.get<std::string>() + "'");
        }
    }
    if (const Json& split = value.at("split"); !split.is_null()) {
        record.split = parse_split(split.get<std::string>());
        if (!record.split) {
            throw DataError("unknown split '" + split.get<std::string>() + "'");
        }
    }
    record.x_c = value.at("x_c").get<std::vector<double>>();
    record.x_u = value.at("x_u").get<std::vector<double>>();
    record.m_e = value.at("m_e").get<std::vector<std::vector<double>>>();
    return record;
}

void write_feature_records(std::ostream& out, std::span<const FeatureRecord> records) {
    for (const FeatureRecord& r : records) {
        out << to_json(r).dump() << '\n';
    }
}

std::vector<FeatureRecord> read_feature_records(std::istream& in) {
    std::vector<FeatureRecord> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        try {
            out.push_back(feature_record_from_json(Json::parse(line)));
        } catch (const nlohmann::json::exception& e) {
            throw DataError("feature record " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

} // namespace ovid
