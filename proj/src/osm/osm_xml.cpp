#include "ovid/osm_xml.hpp"

#include <expat.h>

#include <algorithm>
#include <charconv>
#include <cstring>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <system_error>

#include "ovid/error.hpp"

namespace ovid {

namespace {

using ParserPtr = std::unique_ptr<XML_ParserStruct, decltype(&XML_ParserFree)>;

const char* find_attribute(const XML_Char** attrs, const char* name) noexcept {
    for (; attrs != nullptr && *attrs != nullptr; attrs += 2) {
        if (std::strcmp(attrs[0], name) == 0) {
            return attrs[1];
        }
    }
    return nullptr;
}

std::optional<std::int64_t> to_int(const char* text) noexcept {
    if (text == nullptr) {
        return std::nullopt;
    }
    std::int64_t value = 0;
    const char* end = text + std::strlen(text);
    const auto [ptr, ec] = std::from_chars(text, end, value);
    if (ec != std::errc{} || ptr != end) {
        return std::nullopt;
    }
    return value;
}

std::optional<double> to_double(const char* text) noexcept {
    if (text == nullptr) {
        return std::nullopt;
    }
    double value = 0.0;
    const char* end = text + std::strlen(text);
    const auto [ptr, ec] = std::from_chars(text, end, value);
    if (ec != std::errc{} || ptr != end) {
        return std::nullopt;
    }
    return value;
}

std::optional<Timestamp> to_timestamp(const char* text) noexcept {
    if (text == nullptr) {
        return std::nullopt;
    }
    return Timestamp::parse(text);
}

bool imagery_flag(std::string_view value) noexcept {
    return !value.empty() && value != "no" && value != "false" && value != "0";
}

/// Drives expat over a whole in-memory document and dispatches to a handler
/// with start(name, attrs) / end(name) members.
template <typename Handler>
void run_parser(std::string_view document, Handler& handler) {
    ParserPtr parser{XML_ParserCreate("UTF-8"), &XML_ParserFree};
    if (!parser) {
        throw std::bad_alloc{};
    }
    XML_SetUserData(parser.get(), &handler);
    XML_SetElementHandler(
        parser.get(),
        [](void* data, const XML_Char* name, const XML_Char** attrs) {
            static_cast<Handler*>(data)->start(name, attrs);
        },
        [](void* data, const XML_Char* name) { static_cast<Handler*>(data)->end(name); });

    if (XML_Parse(parser.get(), document.data(), static_cast<int>(document.size()), XML_TRUE) ==
        XML_STATUS_ERROR) {
        throw MalformedXml(XML_ErrorString(XML_GetErrorCode(parser.get())),
                           XML_GetCurrentLineNumber(parser.get()),
                           XML_GetCurrentColumnNumber(parser.get()));
    }
}

class ChangesetDumpHandler {
public:
    ChangesetDump result;

    void start(const XML_Char* name, const XML_Char** attrs) {
        ++m_depth;
        if (std::strcmp(name, "changeset") == 0 && m_depth == 2) {
            begin_changeset(attrs);
        } else if (std::strcmp(name, "tag") == 0 && m_in_changeset && m_depth == 3) {
            add_tag(attrs);
        }
    }

    void end(const XML_Char* name) {
        if (m_in_changeset && m_depth == 2 && std::strcmp(name, "changeset") == 0) {
            if (m_valid) {
                result.changesets.push_back(std::move(m_current));
            } else {
                ++result.skipped_missing_attribute;
            }
            m_in_changeset = false;
        }
        --m_depth;
    }

private:
    void begin_changeset(const XML_Char** attrs) {
        m_in_changeset = true;
        m_current = Changeset{};
        const auto id = to_int(find_attribute(attrs, "id"));
        const auto uid = to_int(find_attribute(attrs, "uid"));
        const auto created = to_timestamp(find_attribute(attrs, "created_at"));
        m_valid = id && uid && created;
        if (!m_valid) {
            return;
        }
        m_current.id = *id;
        m_current.user_id = *uid;
        if (const char* user = find_attribute(attrs, "user")) {
            m_current.user_name = user;
        }
        const auto closed = to_timestamp(find_attribute(attrs, "closed_at"));
        m_current.commit_time = closed ? *closed : *created;

        const auto min_lat = to_double(find_attribute(attrs, "min_lat"));
        const auto min_lon = to_double(find_attribute(attrs, "min_lon"));
        const auto max_lat = to_double(find_attribute(attrs, "max_lat"));
        const auto max_lon = to_double(find_attribute(attrs, "max_lon"));
        if (min_lat && min_lon && max_lat && max_lon) {
            m_current.declared_bbox = BoundingBox{*min_lat, *min_lon, *max_lat, *max_lon};
        }
    }

    void add_tag(const XML_Char** attrs) {
        const char* key = find_attribute(attrs, "k");
        const char* value = find_attribute(attrs, "v");
        if (key == nullptr || value == nullptr) {
            return;
        }
        if (std::strcmp(key, "comment") == 0) {
            m_current.comment = value;
        } else if (std::strcmp(key, "created_by") == 0) {
            m_current.editor = value;
        } else if (std::strcmp(key, "imagery_used") == 0) {
            m_current.imagery_used = imagery_flag(value);
        }
    }

    int m_depth = 0;
    bool m_in_changeset = false;
    bool m_valid = false;
    Changeset m_current;
};

class OsmChangeHandler {
public:
    OsmChange result;

    void start(const XML_Char* name, const XML_Char** attrs) {
        ++m_depth;
        if (m_depth == 2) {
            m_block = parse_operation(name);
            return;
        }
        if (!m_block) {
            return;
        }
        if (m_depth == 3) {
            const auto kind = parse_object_kind(name);
            if (!kind) {
                ++result.skipped_unknown;
                return;
            }
            begin_object(*kind, attrs);
            return;
        }
        if (m_depth == 4 && m_in_object) {
            add_child(name, attrs);
        }
    }

    void end(const XML_Char*) {
        if (m_depth == 3 && m_in_object) {
            finish_object();
        }
        if (m_depth == 2) {
            m_block.reset();
        }
        --m_depth;
    }

private:
    void begin_object(ObjectKind kind, const XML_Char** attrs) {
        m_in_object = true;
        m_entry = ChangeEntry{};
        const auto id = to_int(find_attribute(attrs, "id"));
        const auto version = to_int(find_attribute(attrs, "version"));
        const auto changeset = to_int(find_attribute(attrs, "changeset"));
        const auto timestamp = to_timestamp(find_attribute(attrs, "timestamp"));
        m_valid = id && version && changeset && timestamp && *id != 0 && *version >= 1;
        if (!m_valid) {
            return;
        }
        Edit& edit = m_entry.edit;
        edit.object.id = *id;
        edit.object.kind = kind;
        edit.object.version = *version;
        edit.new_version = *version;
        edit.operation = *m_block;
        edit.timestamp = *timestamp;
        m_entry.changeset_id = *changeset;
        if (kind == ObjectKind::Node) {
            const auto lat = to_double(find_attribute(attrs, "lat"));
            const auto lon = to_double(find_attribute(attrs, "lon"));
            if (lat && lon) {
                edit.object.location.point = LatLon{*lat, *lon};
            }
        }
        m_valid = has_consistent_version(edit);
    }

    void add_child(const XML_Char* name, const XML_Char** attrs) {
        Edit& edit = m_entry.edit;
        if (std::strcmp(name, "tag") == 0) {
            const char* key = find_attribute(attrs, "k");
            const char* value = find_attribute(attrs, "v");
            if (key != nullptr && value != nullptr) {
                edit.object.tags.insert_or_assign(key, value);
            }
        } else if (std::strcmp(name, "nd") == 0 && edit.object.kind == ObjectKind::Way) {
            if (const auto ref = to_int(find_attribute(attrs, "ref"))) {
                edit.object.location.node_refs.push_back(*ref);
            }
        } else if (std::strcmp(name, "member") == 0 && edit.object.kind == ObjectKind::Relation) {
            const char* type = find_attribute(attrs, "type");
            const auto kind = parse_object_kind(type != nullptr ? type : "");
            const auto ref = to_int(find_attribute(attrs, "ref"));
            if (kind && ref) {
                const char* role = find_attribute(attrs, "role");
                edit.object.location.members.push_back(Member{*kind, *ref, role != nullptr ? role : ""});
            }
        }
    }

    void finish_object() {
        m_in_object = false;
        if (!m_valid) {
            ++result.skipped_invalid;
            return;
        }
        if (m_entry.edit.operation == Operation::Delete) {
            m_entry.edit.object.tags.clear();
            m_entry.edit.object.location = Location{};
        }
        result.entries.push_back(std::move(m_entry));
    }

    int m_depth = 0;
    std::optional<Operation> m_block;
    bool m_in_object = false;
    bool m_valid = false;
    ChangeEntry m_entry;
};

// ---- writers -------------------------------------------------------------

void append_escaped(std::string& out, std::string_view text) {
    for (const char c : text) {
        switch (c) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '"':
            out += "&quot;";
            break;
        case '\'':
            out += "&apos;";
            break;
        case '\n':
            out += "&#10;";
            break;
        case '\r':
            out += "&#13;";
            break;
        case '\t':
            out += "&#9;";
            break;
        default:
            out += c;
        }
    }
}

void append_attr(std::string& out, std::string_view name, std::string_view value) {
    out += ' ';
    out += name;
    out += "=\"";
    append_escaped(out, value);
    out += '"';
}

void append_attr(std::string& out, std::string_view name, std::int64_t value) {
    append_attr(out, name, std::to_string(value));
}

void append_attr(std::string& out, std::string_view name, double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    append_attr(out, name, std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)));
}

void append_tag(std::string& out, std::string_view indent, std::string_view key, std::string_view value) {
    out += indent;
    out += "<tag";
    append_attr(out, "k", key);
    append_attr(out, "v", value);
    out += "/>\n";
}

void append_object(std::string& out, const Changeset& changeset, const Edit& edit) {
    const OsmObject& obj = edit.object;
    out += "    <";
    out += to_string(obj.kind);
    append_attr(out, "id", obj.id);
    append_attr(out, "version", edit.new_version);
    append_attr(out, "changeset", changeset.id);
    append_attr(out, "timestamp", edit.timestamp.to_iso());
    append_attr(out, "uid", changeset.user_id);
    append_attr(out, "user", changeset.user_name);
    if (obj.location.point) {
        append_attr(out, "lat", obj.location.point->lat);
        append_attr(out, "lon", obj.location.point->lon);
    }
    if (obj.tags.empty() && obj.location.node_refs.empty() && obj.location.members.empty()) {
        out += "/>\n";
        return;
    }
    out += ">\n";
    for (const ObjectId ref : obj.location.node_refs) {
        out += "      <nd";
        append_attr(out, "ref", ref);
        out += "/>\n";
    }
    for (const Member& m : obj.location.members) {
        out += "      <member";
        append_attr(out, "type", to_string(m.kind));
        append_attr(out, "ref", m.ref);
        append_attr(out, "role", m.role);
        out += "/>\n";
    }
    for (const auto& [k, v] : obj.tags) {
        append_tag(out, "      ", k, v);
    }
    out += "    </";
    out += to_string(obj.kind);
    out += ">\n";
}

} // namespace

ChangesetDump parse_changeset_metadata(std::string_view document) {
    ChangesetDumpHandler handler;
    run_parser(document, handler);
    return std::move(handler.result);
}

OsmChange parse_osmchange(std::string_view document) {
    OsmChangeHandler handler;
    run_parser(document, handler);
    return std::move(handler.result);
}

ChangesetEdits parse_osmchange(std::string_view document, ChangesetId changeset_id) {
    OsmChange all = parse_osmchange(document);
    ChangesetEdits out;
    out.skipped_unknown = all.skipped_unknown;
    out.skipped_invalid = all.skipped_invalid;
    for (ChangeEntry& entry : all.entries) {
        if (entry.changeset_id == changeset_id) {
            out.edits.push_back(std::move(entry.edit));
        }
    }
    return out;
}

AttachReport attach_edits(std::vector<Changeset>& changesets, std::span<const ChangeEntry> entries) {
    std::map<ChangesetId, Changeset*> by_id;
    for (Changeset& c : changesets) {
        by_id.emplace(c.id, &c);
    }
    AttachReport report;
    for (const ChangeEntry& entry : entries) {
        const auto it = by_id.find(entry.changeset_id);
        if (it == by_id.end()) {
            ++report.orphan_edits;
            continue;
        }
        it->second->edits.push_back(entry.edit);
    }
    for (Changeset& c : changesets) {
        Timestamp latest = c.commit_time;
        for (const Edit& e : c.edits) {
            latest = std::max(latest, e.timestamp);
        }
        if (latest != c.commit_time) {
            c.commit_time = latest;
            ++report.commit_time_adjusted;
        }
    }
    return report;
}

std::string write_changeset_dump(std::span<const Changeset> changesets) {
    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<osm version=\"0.6\" generator=\"ovid\">\n";
    for (const Changeset& c : changesets) {
        out += "  <changeset";
        append_attr(out, "id", c.id);
        append_attr(out, "created_at", c.commit_time.to_iso());
        append_attr(out, "closed_at", c.commit_time.to_iso());
        append_attr(out, "open", std::string_view("false"));
        append_attr(out, "user", c.user_name);
        append_attr(out, "uid", c.user_id);
        if (c.declared_bbox) {
            append_attr(out, "min_lat", c.declared_bbox->min_lat);
            append_attr(out, "min_lon", c.declared_bbox->min_lon);
            append_attr(out, "max_lat", c.declared_bbox->max_lat);
            append_attr(out, "max_lon", c.declared_bbox->max_lon);
        }
        append_attr(out, "num_changes", static_cast<std::int64_t>(c.edits.size()));
        const bool has_tags = !c.comment.empty() || !c.editor.empty() || c.imagery_used;
        if (!has_tags) {
            out += "/>\n";
            continue;
        }
        out += ">\n";
        if (!c.comment.empty()) {
            append_tag(out, "    ", "comment", c.comment);
        }
        if (!c.editor.empty()) {
            append_tag(out, "    ", "created_by", c.editor);
        }
        if (c.imagery_used) {
            append_tag(out, "    ", "imagery_used", "true");
        }
        out += "  </changeset>\n";
    }
    out += "</osm>\n";
    return out;
}

std::string write_osmchange(std::span<const Changeset> changesets) {
    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<osmChange version=\"0.6\" generator=\"ovid\">\n";
    std::optional<Operation> open_block;
    for (const Changeset& c : changesets) {
        for (const Edit& e : c.edits) {
            if (open_block != e.operation) {
                if (open_block) {
                    out += "  </";
                    out += to_string(*open_block);
                    out += ">\n";
                }
                out += "  <";
                out += to_string(e.operation);
                out += ">\n";
                open_block = e.operation;
            }
            append_object(out, c, e);
        }
    }
    if (open_block) {
        out += "  </";
        out += to_string(*open_block);
        out += ">\n";
    }
    out += "</osmChange>\n";
    return out;
}

} // namespace ovid
