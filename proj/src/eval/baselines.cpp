#include "ovid/baselines.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "ovid/features.hpp"
#include "ovid/rng.hpp"

namespace ovid {

std::vector<Prediction> random_baseline(std::span<const ChangesetId> changesets, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Prediction> out;
    out.reserve(changesets.size());
    for (const ChangesetId id : changesets) {
        const bool flag = rng.bernoulli(0.5);
        out.push_back(Prediction{id, flag, flag ? 1.0 : 0.0, {}});
    }
    return out;
}

bool RuleSet::any_enabled() const noexcept {
    return mass_deletion.enabled || zero_history_delete.enabled || name_blacklist.enabled || giant_bbox.enabled;
}

Json to_json(const RuleSet& rules) {
    return Json{
        {rule_mass_deletion, {{"enabled", rules.mass_deletion.enabled}, {"max_deletes", rules.mass_deletion.max_deletes}}},
        {rule_zero_history_delete, {{"enabled", rules.zero_history_delete.enabled}}},
        {rule_name_blacklist, {{"enabled", rules.name_blacklist.enabled}, {"terms", rules.name_blacklist.terms}}},
        {rule_giant_bbox, {{"enabled", rules.giant_bbox.enabled}, {"max_size", rules.giant_bbox.max_size}}}};
}

RuleSet rule_set_from_json(const Json& value) {
    RuleSet rules;
    if (value.contains(rule_mass_deletion)) {
        const Json& r = value.at(rule_mass_deletion);
        rules.mass_deletion.enabled = r.value("enabled", rules.mass_deletion.enabled);
        rules.mass_deletion.max_deletes = r.value("max_deletes", rules.mass_deletion.max_deletes);
    }
    if (value.contains(rule_zero_history_delete)) {
        rules.zero_history_delete.enabled =
            value.at(rule_zero_history_delete).value("enabled", rules.zero_history_delete.enabled);
    }
    if (value.contains(rule_name_blacklist)) {
        const Json& r = value.at(rule_name_blacklist);
        rules.name_blacklist.enabled = r.value("enabled", rules.name_blacklist.enabled);
        if (r.contains("terms")) {
            rules.name_blacklist.terms = r.at("terms").get<std::vector<std::string>>();
        }
    }
    if (value.contains(rule_giant_bbox)) {
        const Json& r = value.at(rule_giant_bbox);
        rules.giant_bbox.enabled = r.value("enabled", rules.giant_bbox.enabled);
        rules.giant_bbox.max_size = r.value("max_size", rules.giant_bbox.max_size);
    }
    return rules;
}

namespace {

std::string lower(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool blacklisted_name(const Edit& e, const HistoryStore& store, const std::vector<std::string>& terms) {
    if (e.operation == Operation::Delete) {
        return false;
    }
    const auto name = e.object.tags.find("name");
    if (name == e.object.tags.end()) {
        return false;
    }
    // Only names introduced by this edit count.
    if (const VersionLookup prev = previous_version(store, e.object.id, e.object.kind, e.new_version)) {
        const Tags& old_tags = prev.entry->edit.object.tags;
        const auto old_name = old_tags.find("name");
        if (old_name != old_tags.end() && old_name->second == name->second) {
            return false;
        }
    }
    const std::string value = lower(name->second);
    return std::any_of(terms.begin(), terms.end(), [&value](const std::string& term) {
        return !term.empty() && value.find(lower(term)) != std::string::npos;
    });
}

} // namespace

std::vector<std::string> fired_rules(const Changeset& changeset, const HistoryStore& store, const RuleSet& rules) {
    std::vector<std::string> fired;
    const auto deletes = std::count_if(changeset.edits.begin(), changeset.edits.end(),
                                       [](const Edit& e) { return e.operation == Operation::Delete; });
    if (rules.mass_deletion.enabled && deletes > rules.mass_deletion.max_deletes) {
        fired.emplace_back(rule_mass_deletion);
    }
    if (rules.zero_history_delete.enabled && deletes > 0 &&
        user_activity_before(store, changeset.user_id, changeset.commit_time).past_contributions == 0) {
        fired.emplace_back(rule_zero_history_delete);
    }
    if (rules.name_blacklist.enabled &&
        std::any_of(changeset.edits.begin(), changeset.edits.end(), [&](const Edit& e) {
            return blacklisted_name(e, store, rules.name_blacklist.terms);
        })) {
        fired.emplace_back(rule_name_blacklist);
    }
    if (rules.giant_bbox.enabled && changeset_features(changeset).bbox_size > rules.giant_bbox.max_size) {
        fired.emplace_back(rule_giant_bbox);
    }
    return fired;
}

std::vector<Prediction> rule_baseline(std::span<const Changeset* const> changesets, const HistoryStore& store,
                                      const RuleSet& rules) {
    if (!rules.any_enabled()) {
        throw std::invalid_argument("rule baseline needs at least one enabled rule");
    }
    std::vector<Prediction> out;
    out.reserve(changesets.size());
    for (const Changeset* c : changesets) {
        std::vector<std::string> fired = fired_rules(*c, store, rules);
        const bool flag = !fired.empty();
        out.push_back(Prediction{c->id, flag, flag ? 1.0 : 0.0, std::move(fired)});
    }
    return out;
}

} // namespace ovid
