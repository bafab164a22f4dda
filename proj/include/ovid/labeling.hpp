#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ovid/history.hpp"
#include "ovid/osm_json.hpp"
#include "ovid/osm_types.hpp"

namespace ovid {

enum class Split : std::uint8_t { Train = 0, Validation = 1, Test = 2 };

std::string_view to_string(Split split) noexcept;
std::optional<Split> parse_split(std::string_view text) noexcept;

struct SplitRatios {
    double train = 0.7;
    double validation = 0.1;
    double test = 0.2;

    std::array<double, 3> as_array() const noexcept { return {train, validation, test}; }
};

/// True when the comment contains "vandalism", ignoring ASCII case.
bool mentions_vandalism(std::string_view comment);

/// Changesets whose comment mentions vandalism, ascending by id.
std::vector<ChangesetId> find_revert_changesets(const HistoryStore& store);

/// Ids referenced as "changeset <N>", "changeset/<N>" or "#<N>", first
/// occurrence order, without duplicates.
std::vector<ChangesetId> mentioned_changesets(std::string_view comment);

/// For each object the revert deletes: when every earlier version was
/// written by one single user, all changesets behind those versions.
/// Objects with gaps in their stored history contribute nothing.
std::vector<ChangesetId> attribute_via_deletions(const HistoryStore& store, const Changeset& revert);

struct SplitAssignment {
    std::map<ChangesetId, Split> splits;
    std::array<std::size_t, 3> counts{};
    std::vector<std::string> warnings;
};

/// Author-disjoint split. Authors are shuffled with `seed`, stably sorted by
/// example count (largest first) and each goes to the split that is
/// furthest below its target example count (ties: Train, Validation, Test).
SplitAssignment split_user_disjoint(std::span<const VandalismLabel> labels, const HistoryStore& store,
                                    const SplitRatios& ratios, std::uint64_t seed);

struct LabeledDataset {
    std::vector<VandalismLabel> labels; // ascending changeset id
    std::map<ChangesetId, Split> splits;
    std::uint64_t seed = 0;
    SplitRatios ratios;
    std::vector<std::string> warnings;

    friend bool operator==(const LabeledDataset& a, const LabeledDataset& b) {
        return a.labels == b.labels && a.splits == b.splits && a.seed == b.seed;
    }
};

/// Revert-mined positives plus the same number of uniformly sampled
/// negatives, split author-disjointly.
/// Throws NoVandalismFound or InsufficientNegatives.
LabeledDataset build_labels(const HistoryStore& store, std::uint64_t seed, const SplitRatios& ratios = {});

// ---- files -------------------------------------------------------------

/// JSON-lines: {changeset_id, label, provenance, split}.
void write_labels_jsonl(std::ostream& out, const LabeledDataset& dataset);
LabeledDataset read_labels_jsonl(std::istream& in);

/// Seed, per class and split counts, target and realized ratios.
Json labels_manifest(const LabeledDataset& dataset);

} // namespace ovid
