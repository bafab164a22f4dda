#include "ovid/history.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "ovid/error.hpp"
#include "ovid/hash.hpp"
#include "ovid/osm_json.hpp"

namespace ovid {

HistoryStore HistoryStore::build(std::vector<Changeset> changesets) {
    HistoryStore store;
    for (Changeset& c : changesets) {
        const ChangesetId id = c.id;
        if (!store.m_changesets.emplace(id, std::move(c)).second) {
            throw DuplicateChangesetId("duplicate changeset id " + std::to_string(id));
        }
    }

    for (const auto& [id, c] : store.m_changesets) {
        store.m_users[c.user_id].push_back(id);
        for (const Edit& e : c.edits) {
            store.m_objects[e.object.key()].push_back(VersionEntry{e, id});
        }
    }

    for (auto& [key, entries] : store.m_objects) {
        std::stable_sort(entries.begin(), entries.end(), [](const VersionEntry& a, const VersionEntry& b) {
            return a.edit.new_version < b.edit.new_version;
        });
        const auto dup = std::adjacent_find(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
            return a.edit.new_version == b.edit.new_version;
        });
        if (dup != entries.end()) {
            throw InconsistentHistory(std::string(to_string(key.kind)) + " " + std::to_string(key.id) +
                                      " version " + std::to_string(dup->edit.new_version) +
                                      " appears in changesets " + std::to_string(dup->changeset_id) + " and " +
                                      std::to_string(std::next(dup)->changeset_id));
        }
    }

    for (auto& [user, ids] : store.m_users) {
        std::sort(ids.begin(), ids.end(), [&store](ChangesetId a, ChangesetId b) {
            const Timestamp ta = store.m_changesets.at(a).commit_time;
            const Timestamp tb = store.m_changesets.at(b).commit_time;
            return ta != tb ? ta < tb : a < b;
        });
    }
    return store;
}

const Changeset* HistoryStore::find_changeset(ChangesetId id) const {
    const auto it = m_changesets.find(id);
    return it == m_changesets.end() ? nullptr : &it->second;
}

std::span<const VersionEntry> HistoryStore::versions(const ObjectKey& key) const {
    const auto it = m_objects.find(key);
    if (it == m_objects.end()) {
        return {};
    }
    return it->second;
}

std::span<const ChangesetId> HistoryStore::user_changesets(UserId user) const {
    const auto it = m_users.find(user);
    if (it == m_users.end()) {
        return {};
    }
    return it->second;
}

std::optional<UserId> HistoryStore::author_of(ChangesetId id) const {
    const Changeset* c = find_changeset(id);
    if (c == nullptr) {
        return std::nullopt;
    }
    return c->user_id;
}

std::size_t HistoryStore::edit_count() const noexcept {
    std::size_t n = 0;
    for (const auto& [id, c] : m_changesets) {
        n += c.edits.size();
    }
    return n;
}

VersionLookup previous_version(const HistoryStore& store, ObjectId id, ObjectKind kind, std::int64_t version) {
    VersionLookup result;
    if (version <= 1) {
        return result;
    }
    const auto entries = store.versions(ObjectKey{id, kind});
    const auto it = std::lower_bound(entries.begin(), entries.end(), version - 1,
                                     [](const VersionEntry& e, std::int64_t v) { return e.edit.new_version < v; });
    if (it != entries.end() && it->edit.new_version == version - 1) {
        result.entry = *it;
    } else {
        result.incomplete = true;
    }
    return result;
}

UserActivity user_activity_before(const HistoryStore& store, UserId user, Timestamp cutoff, const KeySet& top_keys) {
    UserActivity activity;
    std::set<IsoWeek> weeks;
    for (const ChangesetId id : store.user_changesets(user)) {
        const Changeset& c = *store.find_changeset(id);
        if (c.commit_time >= cutoff) {
            break; // commit-time ordered
        }
        ++activity.past_changesets;
        if (!activity.first_contribution) {
            activity.first_contribution = c.commit_time;
        }
        weeks.insert(iso_week(c.commit_time));
        for (const Edit& e : c.edits) {
            switch (e.operation) {
            case Operation::Create:
                ++activity.past_creates;
                break;
            case Operation::Modify:
                ++activity.past_modifies;
                break;
            case Operation::Delete:
                ++activity.past_deletes;
                break;
            }
            if (e.operation != Operation::Delete) {
                for (const auto& [k, v] : e.object.tags) {
                    if (top_keys.contains(k)) {
                        ++activity.top12_key_uses;
                    }
                }
            }
        }
    }
    activity.past_contributions = activity.past_creates + activity.past_modifies + activity.past_deletes;
    activity.active_weeks = static_cast<std::int64_t>(weeks.size());
    return activity;
}

UserActivity user_activity_before(const HistoryStore& store, UserId user, Timestamp cutoff) {
    static const KeySet top12{default_top12_keys()};
    return user_activity_before(store, user, cutoff, top12);
}

std::int64_t previous_author_count(const HistoryStore& store, const ObjectKey& key, std::int64_t version,
                                   UserId current_author, bool include_current_author) {
    std::set<UserId> authors;
    for (const VersionEntry& entry : store.versions(key)) {
        if (entry.edit.new_version >= version) {
            break;
        }
        if (const auto author = store.author_of(entry.changeset_id)) {
            authors.insert(*author);
        }
    }
    if (!include_current_author) {
        authors.erase(current_author);
    }
    return static_cast<std::int64_t>(authors.size());
}

namespace {

std::string records_text(const HistoryStore& store) {
    std::ostringstream out;
    for (const auto& [id, c] : store.changesets()) {
        out << to_json(c).dump() << '\n';
    }
    return out.str();
}

Json index_metadata(const HistoryStore& store, const std::string& records) {
    return Json{{"schema_version", snapshot_schema_version},
                {"records_file", snapshot_records_file},
                {"records_hash", fingerprint(records)},
                {"changesets", store.changesets().size()},
                {"edits", store.edit_count()},
                {"objects", store.object_index().size()},
                {"users", store.user_index().size()}};
}

} // namespace

void save_snapshot(const HistoryStore& store, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const std::string records = records_text(store);
    {
        std::ofstream out(dir / snapshot_records_file, std::ios::binary);
        out << records;
    }
    std::ofstream out(dir / snapshot_index_file, std::ios::binary);
    out << index_metadata(store, records).dump(2) << '\n';
}

HistoryStore load_snapshot(const std::filesystem::path& dir) {
    std::ifstream index_in(dir / snapshot_index_file, std::ios::binary);
    std::ifstream records_in(dir / snapshot_records_file, std::ios::binary);
    if (!index_in || !records_in) {
        throw DataError("no history snapshot in " + dir.string() + " (run `ovid ingest` first)");
    }
    Json index;
    try {
        index = Json::parse(index_in);
    } catch (const nlohmann::json::exception& e) {
        throw DataError("unreadable " + (dir / snapshot_index_file).string() + ": " + e.what());
    }
    if (index.value("schema_version", 0) != snapshot_schema_version) {
        throw CompatibilityError("history snapshot schema version " +
                                 std::to_string(index.value("schema_version", 0)) + " is not supported (expected " +
                                 std::to_string(snapshot_schema_version) + ")");
    }
    std::stringstream buffer;
    buffer << records_in.rdbuf();
    const std::string records = buffer.str();
    if (index.at("records_hash").get<std::string>() != fingerprint(records)) {
        throw CompatibilityError("history snapshot records do not match " + (dir / snapshot_index_file).string());
    }
    std::istringstream records_stream(records);
    HistoryStore store = HistoryStore::build(read_changesets_jsonl(records_stream));
    if (index_metadata(store, records) != index) {
        throw CompatibilityError("history snapshot index metadata is inconsistent");
    }
    return store;
}

} // namespace ovid
