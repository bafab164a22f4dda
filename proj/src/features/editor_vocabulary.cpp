#include <algorithm>
#include <map>

#include "ovid/features.hpp"

namespace ovid {

EditorVocabulary::EditorVocabulary(std::vector<std::string> names, std::size_t capacity)
    : m_names(std::move(names)), m_capacity(capacity) {
    if (m_names.size() > m_capacity) {
        m_names.resize(m_capacity);
    }
}

EditorVocabulary EditorVocabulary::fit(std::span<const Changeset* const> changesets, std::size_t capacity) {
    std::map<std::string, std::size_t> counts;
    for (const Changeset* c : changesets) {
        std::string name = normalize_editor(c->editor);
        if (!name.empty()) {
            ++counts[std::move(name)];
        }
    }
    std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    std::vector<std::string> names;
    for (std::size_t i = 0; i < ranked.size() && i < capacity; ++i) {
        names.push_back(ranked[i].first);
    }
    return EditorVocabulary(std::move(names), capacity);
}

std::size_t EditorVocabulary::index_of(std::string_view created_by) const {
    const std::string name = normalize_editor(created_by);
    if (name.empty()) {
        return unknown_index();
    }
    const auto it = std::find(m_names.begin(), m_names.end(), name);
    return it == m_names.end() ? unknown_index() : static_cast<std::size_t>(it - m_names.begin());
}

} // namespace ovid
