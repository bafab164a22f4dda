#include "ovid/osm_types.hpp"

namespace ovid {

std::string_view to_string(ObjectKind kind) noexcept {
    switch (kind) {
    case ObjectKind::Node:
        return "node";
    case ObjectKind::Way:
        return "way";
    case ObjectKind::Relation:
        return "relation";
    }
    return "node";
}

std::string_view to_string(Operation op) noexcept {
    switch (op) {
    case Operation::Create:
        return "create";
    case Operation::Modify:
        return "modify";
    case Operation::Delete:
        return "delete";
    }
    return "create";
}

std::optional<ObjectKind> parse_object_kind(std::string_view text) noexcept {
    if (text == "node") {
        return ObjectKind::Node;
    }
    if (text == "way") {
        return ObjectKind::Way;
    }
    if (text == "relation") {
        return ObjectKind::Relation;
    }
    return std::nullopt;
}

std::optional<Operation> parse_operation(std::string_view text) noexcept {
    if (text == "create") {
        return Operation::Create;
    }
    if (text == "modify") {
        return Operation::Modify;
    }
    if (text == "delete") {
        return Operation::Delete;
    }
    return std::nullopt;
}

std::string_view to_string(Label label) noexcept {
    return label == Label::Vandalism ? "vandalism" : "regular";
}

std::string_view to_string(Provenance provenance) noexcept {
    switch (provenance) {
    case Provenance::RevertMention:
        return "revert_mention";
    case Provenance::RevertDeletion:
        return "revert_deletion";
    case Provenance::SampledNegative:
        return "sampled_negative";
    }
    return "sampled_negative";
}

std::optional<Label> parse_label(std::string_view text) noexcept {
    if (text == "vandalism") {
        return Label::Vandalism;
    }
    if (text == "regular") {
        return Label::Regular;
    }
    return std::nullopt;
}

std::optional<Provenance> parse_provenance(std::string_view text) noexcept {
    if (text == "revert_mention") {
        return Provenance::RevertMention;
    }
    if (text == "revert_deletion") {
        return Provenance::RevertDeletion;
    }
    if (text == "sampled_negative") {
        return Provenance::SampledNegative;
    }
    return std::nullopt;
}

bool has_consistent_version(const Edit& edit) noexcept {
    if (edit.new_version != edit.object.version) {
        return false;
    }
    if (edit.operation == Operation::Create) {
        return edit.new_version == 1;
    }
    return edit.new_version > 1;
}

} // namespace ovid
