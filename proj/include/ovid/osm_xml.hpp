#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ovid/osm_types.hpp"

namespace ovid {

struct ChangesetDump {
    std::vector<Changeset> changesets;
    /// <changeset> elements lacking id, uid or created_at (or with unparsable values).
    std::size_t skipped_missing_attribute = 0;
};

/// Parses the public changeset-dump format (`<osm><changeset .../></osm>`).
/// Returned changesets carry metadata only. Throws MalformedXml.
ChangesetDump parse_changeset_metadata(std::string_view document);

struct ChangeEntry {
    ChangesetId changeset_id = 0;
    Edit edit;
    friend bool operator==(const ChangeEntry&, const ChangeEntry&) = default;
};

struct OsmChange {
    std::vector<ChangeEntry> entries;
    /// Elements inside a create/modify/delete block that are not node/way/relation.
    std::size_t skipped_unknown = 0;
    /// Objects with missing or inconsistent id/version/changeset/timestamp.
    std::size_t skipped_invalid = 0;
};

/// Parses every edit of an osmChange document, in document order.
OsmChange parse_osmchange(std::string_view document);

struct ChangesetEdits {
    std::vector<Edit> edits;
    std::size_t skipped_unknown = 0;
    std::size_t skipped_invalid = 0;
};

/// Edits of one changeset, in document order.
ChangesetEdits parse_osmchange(std::string_view document, ChangesetId changeset_id);

struct AttachReport {
    /// Edits whose changeset is not present in the metadata.
    std::size_t orphan_edits = 0;
    /// Changesets whose commit time was raised to their latest edit.
    std::size_t commit_time_adjusted = 0;
};

/// Appends each entry's edit to its changeset, preserving document order.
AttachReport attach_edits(std::vector<Changeset>& changesets, std::span<const ChangeEntry> entries);

/// Serializes changeset metadata back to the dump format.
std::string write_changeset_dump(std::span<const Changeset> changesets);

/// Serializes the edits of the given changesets as one osmChange document.
std::string write_osmchange(std::span<const Changeset> changesets);

} // namespace ovid
