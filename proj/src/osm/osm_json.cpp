#include "ovid/osm_json.hpp"

#include <istream>
#include <ostream>
#include <string>

#include "ovid/error.hpp"

namespace ovid {

namespace {

ObjectKind kind_from(const Json& value) {
    const auto kind = parse_object_kind(value.get<std::string>());
    if (!kind) {
        throw DataError("unknown object kind '" + value.get<std::string>() + "'");
    }
    return *kind;
}

Timestamp time_from(const Json& value) {
    const auto t = Timestamp::parse(value.get<std::string>());
    if (!t) {
        throw DataError("bad timestamp '" + value.get<std::string>() + "'");
    }
    return *t;
}

Json location_to_json(const OsmObject& obj) {
    if (obj.location.point) {
        return Json{{"lat", obj.location.point->lat}, {"lon", obj.location.point->lon}};
    }
    if (obj.kind == ObjectKind::Way && !obj.location.node_refs.empty()) {
        return Json{{"nodes", obj.location.node_refs}};
    }
    if (obj.kind == ObjectKind::Relation && !obj.location.members.empty()) {
        Json members = Json::array();
        for (const Member& m : obj.location.members) {
            members.push_back(Json{{"type", to_string(m.kind)}, {"ref", m.ref}, {"role", m.role}});
        }
        return Json{{"members", std::move(members)}};
    }
    return nullptr;
}

Location location_from_json(const Json& value) {
    Location loc;
    if (value.is_null()) {
        return loc;
    }
    if (value.contains("lat")) {
        loc.point = LatLon{value.at("lat").get<double>(), value.at("lon").get<double>()};
    }
    if (value.contains("nodes")) {
        loc.node_refs = value.at("nodes").get<std::vector<ObjectId>>();
    }
    if (value.contains("members")) {
        for (const Json& m : value.at("members")) {
            loc.members.push_back(Member{kind_from(m.at("type")), m.at("ref").get<ObjectId>(),
                                         m.at("role").get<std::string>()});
        }
    }
    return loc;
}

} // namespace

Json to_json(const Edit& edit) {
    Json tags = Json::object();
    for (const auto& [k, v] : edit.object.tags) {
        tags[k] = v;
    }
    return Json{{"op", to_string(edit.operation)},
                {"kind", to_string(edit.object.kind)},
                {"id", edit.object.id},
                {"version", edit.new_version},
                {"timestamp", edit.timestamp.to_iso()},
                {"tags", std::move(tags)},
                {"location", location_to_json(edit.object)}};
}

Edit edit_from_json(const Json& record) {
    Edit edit;
    const auto op = parse_operation(record.at("op").get<std::string>());
    if (!op) {
        throw DataError("unknown operation '" + record.at("op").get<std::string>() + "'");
    }
    edit.operation = *op;
    edit.object.kind = kind_from(record.at("kind"));
    edit.object.id = record.at("id").get<ObjectId>();
    edit.new_version = record.at("version").get<std::int64_t>();
    edit.object.version = edit.new_version;
    edit.timestamp = time_from(record.at("timestamp"));
    for (const auto& [k, v] : record.at("tags").items()) {
        edit.object.tags.emplace(k, v.get<std::string>());
    }
    edit.object.location = location_from_json(record.at("location"));
    return edit;
}

Json to_json(const Changeset& changeset) {
    Json bbox = nullptr;
    if (changeset.declared_bbox) {
        const BoundingBox& b = *changeset.declared_bbox;
        bbox = Json::array({b.min_lat, b.min_lon, b.max_lat, b.max_lon});
    }
    Json edits = Json::array();
    for (const Edit& e : changeset.edits) {
        edits.push_back(to_json(e));
    }
    return Json{{"id", changeset.id},
                {"user_id", changeset.user_id},
                {"user_name", changeset.user_name},
                {"commit_time", changeset.commit_time.to_iso()},
                {"comment", changeset.comment},
                {"editor", changeset.editor},
                {"imagery_used", changeset.imagery_used},
                {"bbox", std::move(bbox)},
                {"edits", std::move(edits)}};
}

Changeset changeset_from_json(const Json& record) {
    Changeset c;
    c.id = record.at("id").get<ChangesetId>();
    c.user_id = record.at("user_id").get<UserId>();
    c.user_name = record.at("user_name").get<std::string>();
    c.commit_time = time_from(record.at("commit_time"));
    c.comment = record.at("comment").get<std::string>();
    c.editor = record.at("editor").get<std::string>();
    c.imagery_used = record.at("imagery_used").get<bool>();
    const Json& bbox = record.at("bbox");
    if (!bbox.is_null()) {
        c.declared_bbox = BoundingBox{bbox.at(0).get<double>(), bbox.at(1).get<double>(),
                                      bbox.at(2).get<double>(), bbox.at(3).get<double>()};
    }
    for (const Json& e : record.at("edits")) {
        c.edits.push_back(edit_from_json(e));
    }
    return c;
}

void write_changesets_jsonl(std::ostream& out, std::span<const Changeset> changesets) {
    for (const Changeset& c : changesets) {
        out << to_json(c).dump() << '\n';
    }
}

std::vector<Changeset> read_changesets_jsonl(std::istream& in) {
    std::vector<Changeset> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        try {
            out.push_back(changeset_from_json(Json::parse(line)));
        } catch (const nlohmann::json::exception& e) {
            throw DataError("changeset record " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

} // namespace ovid
