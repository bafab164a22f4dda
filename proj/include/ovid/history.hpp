#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ovid/osm_types.hpp"
#include "ovid/vocabulary.hpp"

namespace ovid {

struct VersionEntry {
    Edit edit;
    ChangesetId changeset_id = 0;
};

/// Immutable index over a set of changesets.
///
/// Object versions are kept strictly ascending per (id, kind); each user's
/// changesets are ordered by commit time, ties broken by changeset id.
class HistoryStore {
public:
    HistoryStore() = default;

    /// Throws DuplicateChangesetId, or InconsistentHistory when two edits
    /// claim the same object version.
    static HistoryStore build(std::vector<Changeset> changesets);

    const std::map<ChangesetId, Changeset>& changesets() const noexcept { return m_changesets; }
    const std::map<ObjectKey, std::vector<VersionEntry>>& object_index() const noexcept { return m_objects; }
    const std::map<UserId, std::vector<ChangesetId>>& user_index() const noexcept { return m_users; }

    const Changeset* find_changeset(ChangesetId id) const;
    std::span<const VersionEntry> versions(const ObjectKey& key) const;
    std::span<const ChangesetId> user_changesets(UserId user) const;

    /// Author of a stored changeset, if known.
    std::optional<UserId> author_of(ChangesetId id) const;

    std::size_t edit_count() const noexcept;

private:
    std::map<ChangesetId, Changeset> m_changesets;
    std::map<ObjectKey, std::vector<VersionEntry>> m_objects;
    std::map<UserId, std::vector<ChangesetId>> m_users;
};

struct VersionLookup {
    std::optional<VersionEntry> entry;
    /// version > 1 but the predecessor is not stored.
    bool incomplete = false;

    explicit operator bool() const noexcept { return entry.has_value(); }
};

VersionLookup previous_version(const HistoryStore& store, ObjectId id, ObjectKind kind, std::int64_t version);

struct UserActivity {
    std::int64_t past_creates = 0;
    std::int64_t past_modifies = 0;
    std::int64_t past_deletes = 0;
    std::int64_t past_contributions = 0;
    std::int64_t past_changesets = 0;
    std::optional<Timestamp> first_contribution;
    std::int64_t active_weeks = 0;
    std::int64_t top12_key_uses = 0;

    friend bool operator==(const UserActivity&, const UserActivity&) = default;
};

/// Activity over the user's changesets committed strictly before `cutoff`.
UserActivity user_activity_before(const HistoryStore& store, UserId user, Timestamp cutoff,
                                  const KeySet& top_keys);
UserActivity user_activity_before(const HistoryStore& store, UserId user, Timestamp cutoff);

/// Distinct authors of the stored versions strictly below `version`.
/// With include_current_author=false, `current_author` is dropped from the set.
std::int64_t previous_author_count(const HistoryStore& store, const ObjectKey& key, std::int64_t version,
                                   UserId current_author, bool include_current_author = true);

/// Snapshot = changesets.jsonl (canonical records, id order) + store_index.json.
inline constexpr const char* snapshot_records_file = "changesets.jsonl";
inline constexpr const char* snapshot_index_file = "store_index.json";
inline constexpr int snapshot_schema_version = 1;

void save_snapshot(const HistoryStore& store, const std::filesystem::path& dir);

/// Throws CompatibilityError when the sidecar disagrees with the records.
HistoryStore load_snapshot(const std::filesystem::path& dir);

} // namespace ovid
