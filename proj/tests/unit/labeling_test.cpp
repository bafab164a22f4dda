#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ovid/error.hpp"
#include "ovid/labeling.hpp"
#include "synthetic.hpp"

using namespace ovid;
using ovid::testing::HistoryBuilder;

TEST(Reverts, DetectionIgnoresCase) {
    EXPECT_TRUE(mentions_vandalism("Reverted vandalism"));
    EXPECT_TRUE(mentions_vandalism("VANDALISM by user x"));
    EXPECT_TRUE(mentions_vandalism("antivandalism sweep"));
    EXPECT_FALSE(mentions_vandalism("vandal"));
    EXPECT_FALSE(mentions_vandalism(""));
}

TEST(Reverts, MentionedChangesets) {
    EXPECT_EQ(mentioned_changesets("revert changeset 123 and #456"), (std::vector<ChangesetId>{123, 456}));
    EXPECT_EQ(mentioned_changesets("see https://www.openstreetmap.org/changeset/789"),
              (std::vector<ChangesetId>{789}));
    EXPECT_EQ(mentioned_changesets("#5 #5 Changeset 5 #6"), (std::vector<ChangesetId>{5, 6}));
    EXPECT_TRUE(mentioned_changesets("reverted vandalism").empty());
    EXPECT_TRUE(mentioned_changesets("changeset abc").empty());
}

TEST(Reverts, DeletionAttributionSingleAuthor) {
    HistoryBuilder h;
    auto a = h.draft(1);
    const ObjectId node = h.create_node(a, 1, 1, {{"name", "x"}});
    const ChangesetId c1 = h.commit(std::move(a));
    auto b = h.draft(1);
    h.modify(b, {node, ObjectKind::Node}, {{"name", "y"}});
    const ChangesetId c2 = h.commit(std::move(b));
    auto r = h.draft(2, "revert vandalism");
    h.remove(r, {node, ObjectKind::Node});
    const ChangesetId revert = h.commit(std::move(r));
    const HistoryStore store = HistoryStore::build(h.changesets());
    EXPECT_EQ(attribute_via_deletions(store, *store.find_changeset(revert)), (std::vector<ChangesetId>{c1, c2}));
}

TEST(Reverts, DeletionAttributionSkipsSharedObjects) {
    HistoryBuilder h;
    auto a = h.draft(1);
    const ObjectId node = h.create_node(a, 1, 1);
    h.commit(std::move(a));
    auto b = h.draft(3);
    h.modify(b, {node, ObjectKind::Node}, {{"name", "y"}});
    h.commit(std::move(b));
    auto r = h.draft(2, "revert vandalism");
    h.remove(r, {node, ObjectKind::Node});
    const ChangesetId revert = h.commit(std::move(r));
    const HistoryStore store = HistoryStore::build(h.changesets());
    EXPECT_TRUE(attribute_via_deletions(store, *store.find_changeset(revert)).empty());
}

TEST(Reverts, DeletionAttributionIgnoresModifies) {
    HistoryBuilder h;
    auto a = h.draft(1);
    const ObjectId node = h.create_node(a, 1, 1);
    h.commit(std::move(a));
    auto r = h.draft(2, "revert vandalism");
    h.modify(r, {node, ObjectKind::Node}, {{"name", "fixed"}});
    const ChangesetId revert = h.commit(std::move(r));
    const HistoryStore store = HistoryStore::build(h.changesets());
    EXPECT_TRUE(attribute_via_deletions(store, *store.find_changeset(revert)).empty());
}

TEST(Reverts, DeletionAttributionNeedsFullHistory) {
    HistoryBuilder h;
    auto a = h.draft(1);
    const ObjectId node = h.create_node(a, 1, 1);
    h.commit(std::move(a));
    auto b = h.draft(1);
    h.modify(b, {node, ObjectKind::Node}, {{"name", "y"}});
    h.commit(std::move(b));
    auto r = h.draft(2, "revert vandalism");
    h.remove(r, {node, ObjectKind::Node});
    const ChangesetId revert = h.commit(std::move(r));
    // drop version 1
    auto changesets = h.changesets();
    changesets.erase(changesets.begin());
    const HistoryStore store = HistoryStore::build(changesets);
    EXPECT_TRUE(attribute_via_deletions(store, *store.find_changeset(revert)).empty());
}

namespace {

// Ten changesets: 3 and 5 are vandalism, 10 reverts them.
HistoryStore ten_changesets() {
    HistoryBuilder h;
    for (int i = 1; i <= 9; ++i) {
        auto d = h.draft(i);
        h.create_node(d, i, i);
        h.commit(std::move(d));
    }
    h.commit(h.draft(20, "Reverted vandalism from changeset 3 and #5"));
    return HistoryStore::build(h.changesets());
}

double max_deviation(const std::array<std::size_t, 3>& counts, const SplitRatios& ratios, std::size_t total) {
    const auto shares = ratios.as_array();
    double worst = 0.0;
    for (std::size_t s = 0; s < 3; ++s) {
        worst = std::max(worst, std::abs(static_cast<double>(counts[s]) - shares[s] * static_cast<double>(total)));
    }
    return worst;
}

} // namespace

TEST(Labels, BalancedLabelCount) {
    const HistoryStore store = ten_changesets();
    const LabeledDataset dataset = build_labels(store, 42);
    ASSERT_EQ(dataset.labels.size(), 4U);
    std::size_t positives = 0;
    for (const VandalismLabel& l : dataset.labels) {
        EXPECT_NE(l.changeset_id, 10);
        if (l.label == Label::Vandalism) {
            ++positives;
            EXPECT_TRUE(l.changeset_id == 3 || l.changeset_id == 5);
            EXPECT_EQ(l.provenance, Provenance::RevertMention);
        } else {
            EXPECT_EQ(l.provenance, Provenance::SampledNegative);
        }
        EXPECT_EQ(dataset.splits.count(l.changeset_id), 1U);
    }
    EXPECT_EQ(positives, 2U);
    EXPECT_TRUE(std::is_sorted(dataset.labels.begin(), dataset.labels.end(),
                               [](const auto& a, const auto& b) { return a.changeset_id < b.changeset_id; }));
}

TEST(Labels, DeterministicForSeed) {
    const HistoryStore store = ten_changesets();
    EXPECT_EQ(build_labels(store, 7), build_labels(store, 7));
}

TEST(Labels, FailureModes) {
    HistoryBuilder h;
    h.commit(h.draft(1, "regular edit"));
    h.commit(h.draft(2, "another"));
    EXPECT_THROW(build_labels(HistoryStore::build(h.changesets()), 1), NoVandalismFound);

    HistoryBuilder g;
    g.commit(g.draft(1, "x"));
    g.commit(g.draft(2, "x"));
    g.commit(g.draft(3, "vandalism: changeset 1 and #2"));
    EXPECT_THROW(build_labels(HistoryStore::build(g.changesets()), 1), InsufficientNegatives);
}

TEST(Labels, JsonLinesRoundTrip) {
    const LabeledDataset dataset = build_labels(ten_changesets(), 3);
    std::ostringstream out;
    write_labels_jsonl(out, dataset);
    std::istringstream in(out.str());
    const LabeledDataset back = read_labels_jsonl(in);
    EXPECT_EQ(back.labels, dataset.labels);
    EXPECT_EQ(back.splits, dataset.splits);
}

TEST(Splits, TenSingleAuthors) {
    HistoryBuilder h;
    std::vector<VandalismLabel> labels;
    for (int i = 0; i < 10; ++i) {
        labels.push_back({h.commit(h.draft(100 + i)), Label::Regular, Provenance::SampledNegative});
    }
    const HistoryStore store = HistoryStore::build(h.changesets());
    const SplitAssignment split = split_user_disjoint(labels, store, {}, 42);
    EXPECT_EQ(split.counts, (std::array<std::size_t, 3>{7, 1, 2}));
    EXPECT_TRUE(split.warnings.empty());
}

TEST(Splits, SingleAuthorGoesToTrainWithWarning) {
    HistoryBuilder h;
    std::vector<VandalismLabel> labels;
    for (int i = 0; i < 4; ++i) {
        labels.push_back({h.commit(h.draft(1)), Label::Regular, Provenance::SampledNegative});
    }
    const SplitAssignment split = split_user_disjoint(labels, HistoryStore::build(h.changesets()), {}, 42);
    EXPECT_EQ(split.counts, (std::array<std::size_t, 3>{4, 0, 0}));
    EXPECT_FALSE(split.warnings.empty());
}

TEST(Splits, UnevenAuthorsNearOptimum) {
    HistoryBuilder h;
    std::vector<VandalismLabel> labels;
    const std::array<int, 4> sizes{5, 3, 1, 1};
    for (std::size_t a = 0; a < sizes.size(); ++a) {
        for (int i = 0; i < sizes[a]; ++i) {
            labels.push_back({h.commit(h.draft(static_cast<UserId>(a + 1))), Label::Regular,
                              Provenance::SampledNegative});
        }
    }
    const HistoryStore store = HistoryStore::build(h.changesets());
    const SplitRatios ratios;
    double optimum = 1e9;
    for (int code = 0; code < 81; ++code) {
        std::array<std::size_t, 3> counts{};
        int rest = code;
        for (const int size : sizes) {
            counts[static_cast<std::size_t>(rest % 3)] += static_cast<std::size_t>(size);
            rest /= 3;
        }
        optimum = std::min(optimum, max_deviation(counts, ratios, 10));
    }
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const SplitAssignment split = split_user_disjoint(labels, store, ratios, seed);
        EXPECT_LE(max_deviation(split.counts, ratios, 10), optimum + 1.0);
        // author-disjoint
        std::map<UserId, Split> seen;
        for (const auto& [id, s] : split.splits) {
            const auto [it, inserted] = seen.emplace(*store.author_of(id), s);
            EXPECT_EQ(it->second, s);
        }
    }
}
