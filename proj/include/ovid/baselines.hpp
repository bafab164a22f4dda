#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ovid/history.hpp"
#include "ovid/metrics.hpp"
#include "ovid/osm_json.hpp"

namespace ovid {

/// Fair coin per changeset.
std::vector<Prediction> random_baseline(std::span<const ChangesetId> changesets, std::uint64_t seed);

/// Edit- and changeset-level heuristics; a changeset is flagged when any
/// enabled rule fires.
struct RuleSet {
    struct MassDeletion {
        bool enabled = true;
        std::int64_t max_deletes = 30; // fires when deletes > max_deletes
    } mass_deletion;

    struct ZeroHistoryDelete {
        bool enabled = true;
    } zero_history_delete;

    struct NameBlacklist {
        bool enabled = true;
        std::vector<std::string> terms{"fuck", "shit", "porn", "hacked"};
    } name_blacklist;

    struct GiantBbox {
        bool enabled = true;
        double max_size = 25.0; // squared degrees
    } giant_bbox;

    bool any_enabled() const noexcept;
};

inline constexpr const char* rule_mass_deletion = "mass_deletion";
inline constexpr const char* rule_zero_history_delete = "zero_history_delete";
inline constexpr const char* rule_name_blacklist = "name_blacklist";
inline constexpr const char* rule_giant_bbox = "giant_bbox";

Json to_json(const RuleSet& rules);
RuleSet rule_set_from_json(const Json& value);

/// Names of the rules that fire on one changeset, in rule order.
std::vector<std::string> fired_rules(const Changeset& changeset, const HistoryStore& store, const RuleSet& rules);

/// Throws std::invalid_argument when no rule is enabled.
std::vector<Prediction> rule_baseline(std::span<const Changeset* const> changesets, const HistoryStore& store,
                                      const RuleSet& rules);

} // namespace ovid
