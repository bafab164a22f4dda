#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "ovid/osm_types.hpp"

namespace ovid {

using Json = nlohmann::ordered_json;

/// Canonical record layout, keys in this order:
///   id, user_id, user_name, commit_time, comment, editor, imagery_used,
///   bbox ([min_lat, min_lon, max_lat, max_lon] or null), edits
/// and per edit:
///   op, kind, id, version, timestamp, tags, location
Json to_json(const Changeset& changeset);
Changeset changeset_from_json(const Json& record);

Json to_json(const Edit& edit);
Edit edit_from_json(const Json& record);

/// One compact JSON document per line.
void write_changesets_jsonl(std::ostream& out, std::span<const Changeset> changesets);
std::vector<Changeset> read_changesets_jsonl(std::istream& in);

} // namespace ovid
