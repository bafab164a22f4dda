#include "synthetic.hpp"

#include <algorithm>
#include <stdexcept>

namespace ovid::testing {

HistoryBuilder::Draft HistoryBuilder::draft(UserId user, std::string comment) {
    Draft d;
    d.user = user;
    d.user_name = "user" + std::to_string(user);
    d.comment = std::move(comment);
    return d;
}

ObjectId HistoryBuilder::create_node(Draft& d, double lat, double lon, Tags tags) {
    const ObjectId id = m_next_node++;
    Edit e;
    e.object.id = id;
    e.object.kind = ObjectKind::Node;
    e.object.location.point = LatLon{lat, lon};
    e.object.tags = std::move(tags);
    e.object.version = 1;
    e.operation = Operation::Create;
    e.new_version = 1;
    d.edits.push_back(std::move(e));
    return id;
}

void HistoryBuilder::modify(Draft& d, ObjectKey key, Tags tags) {
    State& s = m_objects.at(key);
    if (!s.alive) {
        throw std::logic_error("modify of a deleted object");
    }
    Edit e;
    e.object = s.last;
    e.object.tags = std::move(tags);
    e.object.version = s.version + 1;
    e.operation = Operation::Modify;
    e.new_version = s.version + 1;
    // Reserve the version now so several drafts never collide.
    s.version = e.new_version;
    s.last = e.object;
    d.edits.push_back(std::move(e));
}

void HistoryBuilder::remove(Draft& d, ObjectKey key) {
    State& s = m_objects.at(key);
    if (!s.alive) {
        throw std::logic_error("delete of a deleted object");
    }
    Edit e;
    e.object.id = key.id;
    e.object.kind = key.kind;
    e.object.version = s.version + 1;
    e.operation = Operation::Delete;
    e.new_version = s.version + 1;
    s.version = e.new_version;
    s.alive = false;
    d.edits.push_back(std::move(e));
}

ChangesetId HistoryBuilder::commit(Draft d, std::int64_t advance_seconds) {
    m_now = Timestamp(m_now.seconds() + advance_seconds);
    Changeset c;
    c.id = m_next_changeset++;
    c.commit_time = m_now;
    c.user_id = d.user;
    c.user_name = d.user_name;
    c.comment = d.comment;
    c.editor = d.editor;
    c.imagery_used = d.imagery;
    for (Edit& e : d.edits) {
        e.timestamp = Timestamp(m_now.seconds() - 60);
        if (e.operation == Operation::Create) {
            State& s = m_objects[e.object.key()];
            s.version = 1;
            s.alive = true;
            s.last = e.object;
        }
        c.edits.push_back(std::move(e));
    }
    m_changesets.push_back(std::move(c));
    return m_changesets.back().id;
}

bool HistoryBuilder::alive(ObjectKey key) const {
    const auto it = m_objects.find(key);
    return it != m_objects.end() && it->second.alive;
}

std::vector<ObjectKey> HistoryBuilder::alive_nodes() const {
    std::vector<ObjectKey> out;
    for (const auto& [key, s] : m_objects) {
        if (s.alive) {
            out.push_back(key);
        }
    }
    return out;
}

namespace {

const std::vector<std::string> amenities{"cafe", "bench", "post_box", "school", "pharmacy", "parking"};

Tags random_tags(Rng& rng) {
    Tags tags{{"amenity", amenities[rng.uniform_index(amenities.size())]}};
    if (rng.bernoulli(0.5)) {
        tags.emplace("name", "Place " + std::to_string(rng.uniform_index(1000)));
    }
    return tags;
}

ObjectKey take_alive(Rng& rng, const HistoryBuilder& h, std::vector<ObjectKey>& taken) {
    std::vector<ObjectKey> pool;
    for (const ObjectKey& k : h.alive_nodes()) {
        if (std::find(taken.begin(), taken.end(), k) == taken.end()) {
            pool.push_back(k);
        }
    }
    if (pool.empty()) {
        throw std::logic_error("no live objects left");
    }
    const ObjectKey k = pool[rng.uniform_index(pool.size())];
    taken.push_back(k);
    return k;
}

} // namespace

SeparableData separable_dataset(std::size_t targets, std::uint64_t seed) {
    Rng rng(seed);
    HistoryBuilder h;
    constexpr UserId veterans = 30;
    for (int round = 0; round < 3; ++round) {
        for (UserId u = 1; u <= veterans; ++u) {
            auto d = h.draft(u, "mapping");
            const std::size_t n = 3 + rng.uniform_index(4);
            for (std::size_t i = 0; i < n; ++i) {
                h.create_node(d, 48.0 + rng.uniform01(), 11.0 + rng.uniform01(), random_tags(rng));
            }
            h.commit(std::move(d), 600);
        }
    }

    SeparableData data;
    std::vector<std::pair<ChangesetId, bool>> produced;
    UserId next_new_user = 1000;
    for (std::size_t i = 0; i < targets; ++i) {
        const bool positive = i % 2 == 0;
        const std::size_t kind = rng.uniform_index(3);
        const bool new_user = positive || kind == 0;
        const bool deletes = positive || kind == 1;
        const UserId user = new_user ? next_new_user++ : 1 + rng.uniform_index(veterans);
        auto d = h.draft(user, new_user ? "edit" : "update");
        std::vector<ObjectKey> taken;
        const std::size_t creates = rng.uniform_index(3);
        for (std::size_t j = 0; j < creates; ++j) {
            h.create_node(d, 48.0 + rng.uniform01(), 11.0 + rng.uniform01(), random_tags(rng));
        }
        const std::size_t modifies = rng.uniform_index(2) + (creates == 0 && !deletes ? 1 : 0);
        for (std::size_t j = 0; j < modifies; ++j) {
            h.modify(d, take_alive(rng, h, taken), random_tags(rng));
        }
        if (deletes) {
            const std::size_t n = 1 + rng.uniform_index(2);
            for (std::size_t j = 0; j < n; ++j) {
                h.remove(d, take_alive(rng, h, taken));
            }
        }
        produced.emplace_back(h.commit(std::move(d), 900), new_user && deletes);
    }

    data.changesets = h.changesets();
    Rng split_rng(seed ^ 0x5bd1e995ULL);
    for (const auto& [id, vandal] : produced) {
        data.dataset.labels.push_back(VandalismLabel{
            id, vandal ? Label::Vandalism : Label::Regular,
            vandal ? Provenance::RevertDeletion : Provenance::SampledNegative});
        data.dataset.splits.emplace(id, split_rng.bernoulli(0.8) ? Split::Train : Split::Validation);
    }
    data.dataset.seed = seed;
    data.dataset.ratios = SplitRatios{0.8, 0.2, 0.0};
    return data;
}

std::vector<Changeset> random_revert_history(Rng& rng, std::size_t max_authors) {
    HistoryBuilder h;
    const std::size_t authors = 1 + rng.uniform_index(max_authors);
    const std::size_t n = 6 + rng.uniform_index(30);
    std::vector<ChangesetId> regular;
    for (std::size_t i = 0; i < n; ++i) {
        auto d = h.draft(1 + rng.uniform_index(authors), "mapping");
        const std::size_t edits = rng.uniform_index(3);
        for (std::size_t j = 0; j < edits; ++j) {
            h.create_node(d, rng.uniform(-80, 80), rng.uniform(-170, 170), random_tags(rng));
        }
        regular.push_back(h.commit(std::move(d)));
    }
    const UserId reverter = 100;
    const std::size_t reverts = 1 + rng.uniform_index(3);
    for (std::size_t r = 0; r < reverts; ++r) {
        std::string comment = "Revert vandalism";
        const std::size_t mentions = 1 + rng.uniform_index(2);
        for (std::size_t m = 0; m < mentions; ++m) {
            comment += " changeset " + std::to_string(regular[rng.uniform_index(regular.size() / 3 + 1)]);
        }
        h.commit(h.draft(reverter, comment));
    }
    return h.changesets();
}

namespace {

std::string random_text(Rng& rng) {
    static const std::vector<std::string> pieces{"a",      "Main St", "<b>",   "&amp;", "\"q\"", "'s'", "tab\there",
                                                 "line\nbreak", "Straße", "東京", " ", "%20", "]]>", "x"};
    std::string out;
    const std::size_t n = rng.uniform_index(4);
    for (std::size_t i = 0; i < n; ++i) {
        out += pieces[rng.uniform_index(pieces.size())];
    }
    return out;
}

Tags random_text_tags(Rng& rng) {
    Tags tags;
    const std::size_t n = rng.uniform_index(4);
    for (std::size_t i = 0; i < n; ++i) {
        tags["k" + std::to_string(i) + random_text(rng)] = random_text(rng);
    }
    return tags;
}

} // namespace

std::vector<std::vector<Changeset>> roundtrip_corpus(std::size_t documents, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::vector<Changeset>> corpus;
    ChangesetId next_id = 1;
    ObjectId next_object = 1;
    for (std::size_t doc = 0; doc < documents; ++doc) {
        std::vector<Changeset> changesets;
        // Document 0 has no changesets at all; document 1 only empty ones.
        const std::size_t count = doc == 0 ? 0 : 1 + rng.uniform_index(5);
        for (std::size_t i = 0; i < count; ++i) {
            Changeset c;
            c.id = next_id++;
            c.user_id = 1 + rng.uniform_index(50);
            c.user_name = "mapper" + std::to_string(c.user_id) + random_text(rng);
            c.commit_time = Timestamp(1400000000 + static_cast<std::int64_t>(rng.uniform_index(200000000)));
            if (rng.bernoulli(0.7)) {
                c.comment = random_text(rng);
            }
            if (rng.bernoulli(0.7)) {
                c.editor = rng.bernoulli(0.5) ? "JOSM/1.5 (18193 en)" : "iD 2.20.2";
            }
            c.imagery_used = rng.bernoulli(0.3);
            const std::size_t bbox_kind = rng.uniform_index(3);
            if (bbox_kind == 1) {
                const double a = rng.uniform(-90, 90);
                const double b = rng.uniform(-180, 180);
                c.declared_bbox = BoundingBox{a, b, std::min(90.0, a + rng.uniform01()), std::min(180.0, b + 1.5)};
            } else if (bbox_kind == 2) {
                // inverted: max below min
                c.declared_bbox = BoundingBox{10.5, 20.25, -3.125, 7.0};
            }
            const std::size_t edits = doc == 1 ? 0 : rng.uniform_index(6);
            for (std::size_t j = 0; j < edits; ++j) {
                Edit e;
                e.timestamp = Timestamp(c.commit_time.seconds() - static_cast<std::int64_t>(rng.uniform_index(3600)));
                e.object.id = next_object++;
                e.object.kind = static_cast<ObjectKind>(rng.uniform_index(3));
                const std::size_t op = rng.uniform_index(3);
                e.operation = static_cast<Operation>(op);
                e.new_version = op == 0 ? 1 : 2 + static_cast<std::int64_t>(rng.uniform_index(5));
                e.object.version = e.new_version;
                if (e.operation != Operation::Delete) {
                    e.object.tags = random_text_tags(rng);
                    switch (e.object.kind) {
                    case ObjectKind::Node:
                        e.object.location.point = LatLon{rng.uniform(-90, 90), rng.uniform(-180, 180)};
                        break;
                    case ObjectKind::Way:
                        for (std::size_t k = 0, n = rng.uniform_index(5); k < n; ++k) {
                            e.object.location.node_refs.push_back(1 + static_cast<ObjectId>(rng.uniform_index(1000)));
                        }
                        break;
                    case ObjectKind::Relation:
                        for (std::size_t k = 0, n = rng.uniform_index(4); k < n; ++k) {
                            e.object.location.members.push_back(
                                Member{static_cast<ObjectKind>(rng.uniform_index(3)),
                                       1 + static_cast<ObjectId>(rng.uniform_index(1000)),
                                       rng.bernoulli(0.3) ? "" : random_text(rng) + "outer"});
                        }
                        break;
                    }
                }
                c.edits.push_back(std::move(e));
            }
            changesets.push_back(std::move(c));
        }
        corpus.push_back(std::move(changesets));
    }
    return corpus;
}

FeatureRecord random_record(Rng& rng, std::size_t dc, std::size_t du, std::size_t de, std::size_t edits,
                            std::size_t editor_slots) {
    FeatureRecord r;
    r.changeset_id = static_cast<ChangesetId>(rng.uniform_index(1000000));
    for (std::size_t i = 0; i + 1 < dc; ++i) {
        r.x_c.push_back(rng.uniform(-2, 2));
    }
    r.x_c.push_back(static_cast<double>(rng.uniform_index(editor_slots)));
    for (std::size_t i = 0; i < du; ++i) {
        r.x_u.push_back(rng.uniform(-2, 2));
    }
    for (std::size_t k = 0; k < edits; ++k) {
        std::vector<double> row;
        for (std::size_t i = 0; i < de; ++i) {
            row.push_back(rng.uniform(-2, 2));
        }
        r.m_e.push_back(std::move(row));
    }
    return r;
}

} // namespace ovid::testing
