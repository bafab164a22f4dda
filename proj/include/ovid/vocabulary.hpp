#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace ovid {

/// The twelve keys counted by the "top-12 keys used" user feature.
const std::vector<std::string>& default_top12_keys();

/// Conventional keys that make a tag "valid" (the 100 most used OSM keys).
const std::vector<std::string>& default_valid_keys();

/// Sorted lookup set over a key list.
class KeySet {
public:
    KeySet() = default;
    explicit KeySet(const std::vector<std::string>& keys) : m_keys(keys.begin(), keys.end()) {}

    bool contains(std::string_view key) const { return m_keys.find(key) != m_keys.end(); }
    std::size_t size() const noexcept { return m_keys.size(); }

private:
    std::set<std::string, std::less<>> m_keys;
};

/// Application name without version suffix: "JOSM/1.5 (5678 en)" -> "JOSM",
/// "iD 2.20.1" -> "iD". Empty input stays empty.
std::string normalize_editor(std::string_view created_by);

} // namespace ovid
