#include "ovid/features.hpp"

#include <algorithm>
#include <thread>

#include "ovid/error.hpp"

namespace ovid {

std::size_t utf8_length(std::string_view text) noexcept {
    return static_cast<std::size_t>(std::count_if(text.begin(), text.end(), [](char c) {
        return (static_cast<unsigned char>(c) & 0xC0U) != 0x80U;
    }));
}

const std::vector<std::string>& ChangesetFeatures::names() {
    static const std::vector<std::string> names{
        "n_creates", "n_modifies", "n_deletes",     "n_edits",        "min_lat",     "max_lat",
        "min_lon",   "max_lon",    "bbox_size",     "comment_length", "has_imagery", "editor_id",
    };
    return names;
}

std::vector<double> ChangesetFeatures::to_vector() const {
    return {static_cast<double>(n_creates),      static_cast<double>(n_modifies),
            static_cast<double>(n_deletes),      static_cast<double>(n_edits),
            min_lat,                             max_lat,
            min_lon,                             max_lon,
            bbox_size,                           static_cast<double>(comment_length),
            has_imagery ? 1.0 : 0.0,             static_cast<double>(editor_id)};
}

const std::vector<std::string>& UserFeatures::names() {
    static const std::vector<std::string> names{
        "past_creates",     "past_modifies", "past_deletes",   "past_contributions",
        "account_age_days", "active_weeks",  "top12_key_uses",
    };
    return names;
}

std::vector<double> UserFeatures::to_vector() const {
    return {static_cast<double>(past_creates),       static_cast<double>(past_modifies),
            static_cast<double>(past_deletes),       static_cast<double>(past_contributions),
            account_age_days,                        static_cast<double>(active_weeks),
            static_cast<double>(top12_key_uses)};
}

const std::vector<std::string>& EditFeatures::names() {
    static const std::vector<std::string> names{
        "kind_node",  "kind_way",  "kind_relation", "version",
        "n_previous_authors", "n_tags", "n_valid_tags", "op_create",
        "op_modify",  "op_delete", "seconds_to_previous_version", "known_previous",
        "n_previous_valid_tags", "name_changed",
    };
    return names;
}

std::vector<double> EditFeatures::to_vector() const {
    const auto one_hot = [](bool hot) { return hot ? 1.0 : 0.0; };
    return {one_hot(kind == ObjectKind::Node),
            one_hot(kind == ObjectKind::Way),
            one_hot(kind == ObjectKind::Relation),
            static_cast<double>(version),
            static_cast<double>(n_previous_authors),
            static_cast<double>(n_tags),
            static_cast<double>(n_valid_tags),
            one_hot(operation == Operation::Create),
            one_hot(operation == Operation::Modify),
            one_hot(operation == Operation::Delete),
            seconds_to_previous_version,
            one_hot(known_previous),
            static_cast<double>(n_previous_valid_tags),
            one_hot(name_changed)};
}

Featurizer::Featurizer(const HistoryStore& store, FeatureConfig config, EditorVocabulary editors)
    : m_store(&store),
      m_config(std::move(config)),
      m_editors(std::move(editors)),
      m_top_keys(m_config.top12_keys),
      m_valid_keys(m_config.valid_keys) {}

ChangesetFeatures Featurizer::changeset(const Changeset& c) const {
    ChangesetFeatures f;
    for (const Edit& e : c.edits) {
        switch (e.operation) {
        case Operation::Create:
            ++f.n_creates;
            break;
        case Operation::Modify:
            ++f.n_modifies;
            break;
        case Operation::Delete:
            ++f.n_deletes;
            break;
        }
    }
    f.n_edits = static_cast<std::int64_t>(c.edits.size());

    std::optional<BoundingBox> box = c.declared_bbox;
    if (!box) {
        for (const Edit& e : c.edits) {
            if (!e.object.location.point) {
                continue;
            }
            const LatLon p = *e.object.location.point;
            if (!box) {
                box = BoundingBox{p.lat, p.lon, p.lat, p.lon};
            } else {
                box->min_lat = std::min(box->min_lat, p.lat);
                box->min_lon = std::min(box->min_lon, p.lon);
                box->max_lat = std::max(box->max_lat, p.lat);
                box->max_lon = std::max(box->max_lon, p.lon);
            }
        }
    }
    if (box) {
        f.min_lat = box->min_lat;
        f.max_lat = box->max_lat;
        f.min_lon = box->min_lon;
        f.max_lon = box->max_lon;
        f.bbox_size = std::max(0.0, box->max_lat - box->min_lat) * std::max(0.0, box->max_lon - box->min_lon);
    }
    f.comment_length = static_cast<std::int64_t>(utf8_length(c.comment));
    f.has_imagery = c.imagery_used;
    f.editor_id = m_editors.index_of(c.editor);
    return f;
}

UserFeatures Featurizer::user(const Changeset& c) const {
    const UserActivity a = user_activity_before(*m_store, c.user_id, c.commit_time, m_top_keys);
    UserFeatures f;
    f.past_creates = a.past_creates;
    f.past_modifies = a.past_modifies;
    f.past_deletes = a.past_deletes;
    f.past_contributions = a.past_contributions;
    if (a.first_contribution) {
        f.account_age_days =
            static_cast<double>(c.commit_time.seconds() - a.first_contribution->seconds()) / seconds_per_day;
    }
    f.active_weeks = a.active_weeks;
    f.top12_key_uses = a.top12_key_uses;
    return f;
}

EditFeatures Featurizer::edit(const Edit& e, UserId author) const {
    const auto count_valid = [this](const Tags& tags) {
        return static_cast<std::int64_t>(std::count_if(
            tags.begin(), tags.end(), [this](const auto& tag) { return m_valid_keys.contains(tag.first); }));
    };

    EditFeatures f;
    f.kind = e.object.kind;
    f.version = e.new_version;
    f.n_previous_authors =
        previous_author_count(*m_store, e.object.key(), e.new_version, author, m_config.count_current_author);
    f.n_tags = static_cast<std::int64_t>(e.object.tags.size());
    f.n_valid_tags = count_valid(e.object.tags);
    f.operation = e.operation;

    const VersionLookup previous = previous_version(*m_store, e.object.id, e.object.kind, e.new_version);
    if (previous) {
        const Edit& prev = previous.entry->edit;
        f.known_previous = true;
        f.seconds_to_previous_version =
            static_cast<double>(std::max<std::int64_t>(0, e.timestamp.seconds() - prev.timestamp.seconds()));
        f.n_previous_valid_tags = count_valid(prev.object.tags);
        const auto before = prev.object.tags.find("name");
        const auto after = e.object.tags.find("name");
        const bool had = before != prev.object.tags.end();
        const bool has = after != e.object.tags.end();
        f.name_changed = had != has || (had && before->second != after->second);
    }
    return f;
}

ChangesetFeatures changeset_features(const Changeset& c, const EditorVocabulary& editors) {
    static const HistoryStore empty;
    return Featurizer(empty, FeatureConfig{}, editors).changeset(c);
}

UserFeatures user_features(const Changeset& c, const HistoryStore& store) {
    return Featurizer(store).user(c);
}

EditFeatures edit_features(const Edit& e, const HistoryStore& store, UserId author) {
    return Featurizer(store).edit(e, author);
}

FeatureRecord make_record(const Featurizer& featurizer, const Changeset& c) {
    FeatureRecord record;
    record.changeset_id = c.id;
    record.x_c = featurizer.changeset(c).to_vector();
    record.x_u = featurizer.user(c).to_vector();
    record.m_e.reserve(c.edits.size());
    for (const Edit& e : c.edits) {
        record.m_e.push_back(featurizer.edit(e, c.user_id).to_vector());
    }
    return record;
}

namespace {

template <typename Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
    threads = std::max<std::size_t>(1, std::min(threads, count));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::vector<std::thread> workers;
    workers.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        workers.emplace_back([&fn, t, threads, count] {
            for (std::size_t i = t; i < count; i += threads) {
                fn(i);
            }
        });
    }
    for (std::thread& w : workers) {
        w.join();
    }
}

} // namespace

std::vector<FeatureRecord> featurize(const Featurizer& featurizer, std::span<const Changeset> changesets,
                                     std::size_t threads) {
    std::vector<FeatureRecord> records(changesets.size());
    parallel_for(changesets.size(), threads,
                 [&](std::size_t i) { records[i] = make_record(featurizer, changesets[i]); });
    return records;
}

FeatureSet build_feature_set(const HistoryStore& store, const LabeledDataset& dataset, const FeatureConfig& config,
                             std::size_t threads) {
    std::vector<const Changeset*> labeled;
    std::vector<const Changeset*> train;
    for (const VandalismLabel& label : dataset.labels) {
        const Changeset* c = store.find_changeset(label.changeset_id);
        if (c == nullptr) {
            throw DataError("labeled changeset " + std::to_string(label.changeset_id) + " is not in the history");
        }
        labeled.push_back(c);
        const auto split = dataset.splits.find(label.changeset_id);
        if (split != dataset.splits.end() && split->second == Split::Train) {
            train.push_back(c);
        }
    }

    FeatureSet out;
    EditorVocabulary editors = EditorVocabulary::fit(train, config.editor_vocabulary_size);
    out.layout = FeatureLayout::make(config, editors);
    const Featurizer featurizer(store, config, std::move(editors));

    out.records.resize(labeled.size());
    parallel_for(labeled.size(), threads, [&](std::size_t i) {
        FeatureRecord record = make_record(featurizer, *labeled[i]);
        record.label = dataset.labels[i].label;
        const auto split = dataset.splits.find(record.changeset_id);
        if (split != dataset.splits.end()) {
            record.split = split->second;
        }
        out.records[i] = std::move(record);
    });
    return out;
}

} // namespace ovid
