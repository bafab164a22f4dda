#include "ovid/labeling.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <regex>
#include <set>

#include "ovid/error.hpp"
#include "ovid/rng.hpp"

namespace ovid {

std::string_view to_string(Split split) noexcept {
    switch (split) {
    case Split::Train:
        return "train";
    case Split::Validation:
        return "validation";
    case Split::Test:
        return "test";
    }
    return "train";
}

std::optional<Split> parse_split(std::string_view text) noexcept {
    if (text == "train") {
        return Split::Train;
    }
    if (text == "validation") {
        return Split::Validation;
    }
    if (text == "test") {
        return Split::Test;
    }
    return std::nullopt;
}

bool mentions_vandalism(std::string_view comment) {
    static constexpr std::string_view needle = "vandalism";
    const auto it = std::search(comment.begin(), comment.end(), needle.begin(), needle.end(), [](char a, char b) {
        return std::tolower(static_cast<unsigned char>(a)) == b;
    });
    return it != comment.end();
}

std::vector<ChangesetId> find_revert_changesets(const HistoryStore& store) {
    std::vector<ChangesetId> out;
    for (const auto& [id, c] : store.changesets()) {
        if (mentions_vandalism(c.comment)) {
            out.push_back(id);
        }
    }
    return out;
}

std::vector<ChangesetId> mentioned_changesets(std::string_view comment) {
    static const std::regex pattern(R"(changeset\s+(\d+)|changeset/(\d+)|#(\d+))", std::regex::icase);
    std::vector<ChangesetId> out;
    const std::string text(comment);
    for (auto it = std::sregex_iterator(text.begin(), text.end(), pattern); it != std::sregex_iterator(); ++it) {
        const std::smatch& m = *it;
        for (std::size_t group = 1; group <= 3; ++group) {
            if (!m[group].matched) {
                continue;
            }
            const std::string digits = m[group].str();
            if (digits.size() > 18) {
                break;
            }
            const ChangesetId id = std::stoll(digits);
            if (std::find(out.begin(), out.end(), id) == out.end()) {
                out.push_back(id);
            }
            break;
        }
    }
    return out;
}

std::vector<ChangesetId> attribute_via_deletions(const HistoryStore& store, const Changeset& revert) {
    std::set<ChangesetId> found;
    for (const Edit& e : revert.edits) {
        if (e.operation != Operation::Delete) {
            continue;
        }
        std::set<UserId> authors;
        std::vector<ChangesetId> contributing;
        std::int64_t expected_version = 1;
        bool complete = true;
        for (const VersionEntry& entry : store.versions(e.object.key())) {
            if (entry.edit.new_version >= e.new_version) {
                break;
            }
            if (entry.edit.new_version != expected_version) {
                complete = false;
                break;
            }
            ++expected_version;
            const auto author = store.author_of(entry.changeset_id);
            if (!author) {
                complete = false;
                break;
            }
            authors.insert(*author);
            contributing.push_back(entry.changeset_id);
        }
        complete = complete && expected_version == e.new_version;
        if (complete && authors.size() == 1) {
            found.insert(contributing.begin(), contributing.end());
        }
    }
    found.erase(revert.id);
    return {found.begin(), found.end()};
}

SplitAssignment split_user_disjoint(std::span<const VandalismLabel> labels, const HistoryStore& store,
                                    const SplitRatios& ratios, std::uint64_t seed) {
    std::map<UserId, std::vector<ChangesetId>> by_author;
    for (const VandalismLabel& label : labels) {
        const auto author = store.author_of(label.changeset_id);
        if (!author) {
            throw DataError("labeled changeset " + std::to_string(label.changeset_id) + " has no known author");
        }
        by_author[*author].push_back(label.changeset_id);
    }

    std::vector<UserId> authors;
    authors.reserve(by_author.size());
    for (const auto& [user, ids] : by_author) {
        authors.push_back(user);
    }
    Rng rng(seed);
    rng.shuffle(std::span<UserId>(authors));
    std::stable_sort(authors.begin(), authors.end(), [&by_author](UserId a, UserId b) {
        return by_author.at(a).size() > by_author.at(b).size();
    });

    const auto shares = ratios.as_array();
    const auto total = static_cast<double>(labels.size());
    SplitAssignment result;
    for (const UserId user : authors) {
        std::size_t best = 0;
        double best_deficit = -std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < 3; ++s) {
            const double deficit = shares[s] * total - static_cast<double>(result.counts[s]);
            if (deficit > best_deficit) {
                best_deficit = deficit;
                best = s;
            }
        }
        const auto split = static_cast<Split>(best);
        for (const ChangesetId id : by_author.at(user)) {
            result.splits.emplace(id, split);
        }
        result.counts[best] += by_author.at(user).size();
    }

    for (std::size_t s = 0; s < 3; ++s) {
        if (shares[s] > 0.0 && result.counts[s] == 0 && !labels.empty()) {
            result.warnings.push_back(std::string(to_string(static_cast<Split>(s))) + " split is empty (" +
                                      std::to_string(by_author.size()) + " distinct authors)");
        }
    }
    return result;
}

LabeledDataset build_labels(const HistoryStore& store, std::uint64_t seed, const SplitRatios& ratios) {
    const std::vector<ChangesetId> reverts = find_revert_changesets(store);
    const std::set<ChangesetId> revert_set(reverts.begin(), reverts.end());

    std::map<ChangesetId, Provenance> positives;
    const auto add_positive = [&](ChangesetId id, Provenance provenance) {
        if (revert_set.count(id) != 0 || store.find_changeset(id) == nullptr) {
            return;
        }
        auto [it, inserted] = positives.emplace(id, provenance);
        if (!inserted && provenance == Provenance::RevertMention) {
            it->second = provenance;
        }
    };

    for (const ChangesetId revert_id : reverts) {
        const Changeset& revert = *store.find_changeset(revert_id);
        const std::vector<ChangesetId> mentioned = mentioned_changesets(revert.comment);
        if (!mentioned.empty()) {
            for (const ChangesetId id : mentioned) {
                add_positive(id, Provenance::RevertMention);
            }
            continue;
        }
        for (const ChangesetId id : attribute_via_deletions(store, revert)) {
            add_positive(id, Provenance::RevertDeletion);
        }
    }
    if (positives.empty()) {
        throw NoVandalismFound("no vandalism changesets could be attributed from " + std::to_string(reverts.size()) +
                               " revert changesets");
    }

    std::vector<ChangesetId> pool;
    for (const auto& [id, c] : store.changesets()) {
        if (positives.count(id) == 0 && revert_set.count(id) == 0) {
            pool.push_back(id);
        }
    }
    if (pool.size() < positives.size()) {
        throw InsufficientNegatives("need " + std::to_string(positives.size()) + " negatives but only " +
                                    std::to_string(pool.size()) + " candidate changesets remain");
    }

    // Partial Fisher-Yates: the first k slots become a uniform sample.
    Rng rng(seed);
    const std::size_t k = positives.size();
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + rng.uniform_index(pool.size() - i);
        std::swap(pool[i], pool[j]);
    }

    LabeledDataset dataset;
    dataset.seed = seed;
    dataset.ratios = ratios;
    for (const auto& [id, provenance] : positives) {
        dataset.labels.push_back(VandalismLabel{id, Label::Vandalism, provenance});
    }
    for (std::size_t i = 0; i < k; ++i) {
        dataset.labels.push_back(VandalismLabel{pool[i], Label::Regular, Provenance::SampledNegative});
    }
    std::sort(dataset.labels.begin(), dataset.labels.end(),
              [](const VandalismLabel& a, const VandalismLabel& b) { return a.changeset_id < b.changeset_id; });

    SplitAssignment split = split_user_disjoint(dataset.labels, store, ratios, seed);
    dataset.splits = std::move(split.splits);
    dataset.warnings = std::move(split.warnings);
    return dataset;
}

} // namespace ovid
