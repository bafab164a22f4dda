#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ovid/history.hpp"
#include "ovid/labeling.hpp"
#include "ovid/osm_json.hpp"
#include "ovid/osm_types.hpp"
#include "ovid/vocabulary.hpp"

namespace ovid {

struct FeatureConfig {
    std::vector<std::string> top12_keys = default_top12_keys();
    std::vector<std::string> valid_keys = default_valid_keys();
    std::size_t editor_vocabulary_size = 20;
    /// Whether the current author counts toward "previous authors" when they
    /// also wrote an earlier version.
    bool count_current_author = true;

    friend bool operator==(const FeatureConfig&, const FeatureConfig&) = default;
};

Json to_json(const FeatureConfig& config);
FeatureConfig feature_config_from_json(const Json& value);

/// Most frequent normalized editor names; index capacity() is the unknown slot.
class EditorVocabulary {
public:
    EditorVocabulary() = default;
    EditorVocabulary(std::vector<std::string> names, std::size_t capacity);

    /// Top `capacity` names by frequency, ties by name.
    static EditorVocabulary fit(std::span<const Changeset* const> changesets, std::size_t capacity);

    std::size_t index_of(std::string_view created_by) const;
    std::size_t unknown_index() const noexcept { return m_capacity; }
    /// Embedding rows needed: capacity + 1.
    std::size_t slots() const noexcept { return m_capacity + 1; }
    std::size_t capacity() const noexcept { return m_capacity; }
    const std::vector<std::string>& names() const noexcept { return m_names; }

    friend bool operator==(const EditorVocabulary&, const EditorVocabulary&) = default;

private:
    std::vector<std::string> m_names;
    std::size_t m_capacity = 20;
};

struct ChangesetFeatures {
    std::int64_t n_creates = 0;
    std::int64_t n_modifies = 0;
    std::int64_t n_deletes = 0;
    std::int64_t n_edits = 0;
    double min_lat = 0.0;
    double max_lat = 0.0;
    double min_lon = 0.0;
    double max_lon = 0.0;
    double bbox_size = 0.0;
    std::int64_t comment_length = 0;
    bool has_imagery = false;
    std::size_t editor_id = 0;

    /// Layout of to_vector(); editor_id comes last.
    static const std::vector<std::string>& names();
    std::vector<double> to_vector() const;
};

struct UserFeatures {
    std::int64_t past_creates = 0;
    std::int64_t past_modifies = 0;
    std::int64_t past_deletes = 0;
    std::int64_t past_contributions = 0;
    double account_age_days = 0.0;
    std::int64_t active_weeks = 0;
    std::int64_t top12_key_uses = 0;

    static const std::vector<std::string>& names();
    std::vector<double> to_vector() const;
};

struct EditFeatures {
    ObjectKind kind = ObjectKind::Node;
    std::int64_t version = 1;
    std::int64_t n_previous_authors = 0;
    std::int64_t n_tags = 0;
    std::int64_t n_valid_tags = 0;
    Operation operation = Operation::Create;
    double seconds_to_previous_version = 0.0;
    bool known_previous = false;
    std::int64_t n_previous_valid_tags = 0;
    bool name_changed = false;

    static const std::vector<std::string>& names();
    std::vector<double> to_vector() const;
};

/// Number of code points in a UTF-8 string.
std::size_t utf8_length(std::string_view text) noexcept;

/// Computes all three feature groups against one history store.
class Featurizer {
public:
    Featurizer(const HistoryStore& store, FeatureConfig config = {}, EditorVocabulary editors = {});

    ChangesetFeatures changeset(const Changeset& c) const;
    UserFeatures user(const Changeset& c) const;
    EditFeatures edit(const Edit& e, UserId author) const;

    const FeatureConfig& config() const noexcept { return m_config; }
    const EditorVocabulary& editors() const noexcept { return m_editors; }

private:
    const HistoryStore* m_store;
    FeatureConfig m_config;
    EditorVocabulary m_editors;
    KeySet m_top_keys;
    KeySet m_valid_keys;
};

ChangesetFeatures changeset_features(const Changeset& c, const EditorVocabulary& editors = {});
UserFeatures user_features(const Changeset& c, const HistoryStore& store);
EditFeatures edit_features(const Edit& e, const HistoryStore& store, UserId author);

// ---- records and layout --------------------------------------------------

struct FeatureRecord {
    ChangesetId changeset_id = 0;
    std::optional<Label> label;
    std::optional<Split> split;
    std::vector<double> x_c;
    std::vector<double> x_u;
    std::vector<std::vector<double>> m_e; // one row per edit, edit order

    friend bool operator==(const FeatureRecord&, const FeatureRecord&) = default;
};

FeatureRecord make_record(const Featurizer& featurizer, const Changeset& c);

/// Names every dimension in order; its hash pins models to a feature layout.
struct FeatureLayout {
    std::vector<std::string> changeset_dims;
    std::vector<std::string> user_dims;
    std::vector<std::string> edit_dims;
    std::vector<bool> changeset_passthrough;
    std::vector<bool> user_passthrough;
    std::vector<bool> edit_passthrough;
    std::size_t editor_dim = 0;
    EditorVocabulary editors;
    FeatureConfig config;

    static FeatureLayout make(const FeatureConfig& config, const EditorVocabulary& editors);

    Json to_json() const;
    static FeatureLayout from_json(const Json& value);
    std::string hash() const;
};

struct FeatureSet {
    FeatureLayout layout;
    std::vector<FeatureRecord> records; // label order
};

/// Fits the editor vocabulary on Train changesets and featurizes every
/// labeled changeset. Runs on up to `threads` worker threads; output order
/// does not depend on the thread count.
FeatureSet build_feature_set(const HistoryStore& store, const LabeledDataset& dataset,
                             const FeatureConfig& config, std::size_t threads = 1);

/// Featurizes arbitrary changesets (labels and splits left empty).
std::vector<FeatureRecord> featurize(const Featurizer& featurizer, std::span<const Changeset> changesets,
                                     std::size_t threads = 1);

/// {changeset_id, label, split, x_c, x_u, m_e} per line.
Json to_json(const FeatureRecord& record);
FeatureRecord feature_record_from_json(const Json& value);
void write_feature_records(std::ostream& out, std::span<const FeatureRecord> records);
std::vector<FeatureRecord> read_feature_records(std::istream& in);

// ---- scaler -------------------------------------------------------------

inline constexpr double scaler_std_floor = 1e-8;

struct StandardScaler {
    std::vector<double> mean;
    std::vector<double> stddev;
    std::vector<bool> passthrough;

    void apply(std::span<double> row) const;
    friend bool operator==(const StandardScaler&, const StandardScaler&) = default;
};

struct Scaler {
    StandardScaler changeset;
    StandardScaler user;
    StandardScaler edit;
    friend bool operator==(const Scaler&, const Scaler&) = default;
};

/// Fits on Train records only (records tagged with another split are
/// rejected). Edit statistics pool all edit rows. Throws EmptyTrainSet.
Scaler fit_scaler(std::span<const FeatureRecord> train, const FeatureLayout& layout);
FeatureRecord apply_scaler(const Scaler& scaler, FeatureRecord record);

Json to_json(const Scaler& scaler);
Scaler scaler_from_json(const Json& value);

} // namespace ovid
