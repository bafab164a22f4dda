#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ovid/timestamp.hpp"

namespace ovid {

enum class ObjectKind : std::uint8_t { Node, Way, Relation };
enum class Operation : std::uint8_t { Create, Modify, Delete };

std::string_view to_string(ObjectKind kind) noexcept;
std::string_view to_string(Operation op) noexcept;
std::optional<ObjectKind> parse_object_kind(std::string_view text) noexcept;
std::optional<Operation> parse_operation(std::string_view text) noexcept;

using ObjectId = std::int64_t;
using ChangesetId = std::int64_t;
using UserId = std::int64_t;

/// Unique keys, kept sorted so iteration order is deterministic.
using Tags = std::map<std::string, std::string, std::less<>>;

struct LatLon {
    double lat = 0.0;
    double lon = 0.0;
    friend bool operator==(const LatLon&, const LatLon&) = default;
};

struct Member {
    ObjectKind kind = ObjectKind::Node;
    ObjectId ref = 0;
    std::string role;
    friend bool operator==(const Member&, const Member&) = default;
};

/// Node position, or unresolved member references for ways and relations.
struct Location {
    std::optional<LatLon> point;
    std::vector<ObjectId> node_refs;
    std::vector<Member> members;
    friend bool operator==(const Location&, const Location&) = default;
};

struct ObjectKey {
    ObjectId id = 0;
    ObjectKind kind = ObjectKind::Node;
    friend auto operator<=>(const ObjectKey&, const ObjectKey&) = default;
};

struct OsmObject {
    ObjectId id = 0;
    ObjectKind kind = ObjectKind::Node;
    Location location;
    Tags tags;
    std::int64_t version = 1;

    ObjectKey key() const noexcept { return {id, kind}; }
    friend bool operator==(const OsmObject&, const OsmObject&) = default;
};

/// One create/modify/delete. `object` holds the state after the edit; a
/// deleted object keeps its identity and version but no tags or geometry.
struct Edit {
    OsmObject object;
    Operation operation = Operation::Create;
    std::int64_t new_version = 1;
    Timestamp timestamp;

    friend bool operator==(const Edit&, const Edit&) = default;
};

struct BoundingBox {
    double min_lat = 0.0;
    double min_lon = 0.0;
    double max_lat = 0.0;
    double max_lon = 0.0;
    friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct Changeset {
    ChangesetId id = 0;
    std::vector<Edit> edits;
    Timestamp commit_time;
    UserId user_id = 0;
    std::string user_name;
    std::string comment;
    std::string editor;
    bool imagery_used = false;
    std::optional<BoundingBox> declared_bbox;

    friend bool operator==(const Changeset&, const Changeset&) = default;
};

enum class Label : std::uint8_t { Regular, Vandalism };
enum class Provenance : std::uint8_t { RevertMention, RevertDeletion, SampledNegative };

std::string_view to_string(Label label) noexcept;
std::string_view to_string(Provenance provenance) noexcept;
std::optional<Label> parse_label(std::string_view text) noexcept;
std::optional<Provenance> parse_provenance(std::string_view text) noexcept;

struct VandalismLabel {
    ChangesetId changeset_id = 0;
    Label label = Label::Regular;
    Provenance provenance = Provenance::SampledNegative;
    friend bool operator==(const VandalismLabel&, const VandalismLabel&) = default;
};

/// Checks the version rules of a single edit (create => 1, else > 1).
bool has_consistent_version(const Edit& edit) noexcept;

} // namespace ovid
