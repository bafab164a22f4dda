#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace ovid {

/// 64-bit FNV-1a. Used for content and layout fingerprints, not security.
std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL) noexcept;

/// Lower-case, zero-padded 16 digit hex form of a 64-bit value.
std::string to_hex(std::uint64_t value);

inline std::string fingerprint(std::string_view data) { return to_hex(fnv1a64(data)); }

} // namespace ovid
