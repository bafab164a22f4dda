#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace ovid {

/// A UTC instant with one second resolution.
class Timestamp {
public:
    constexpr Timestamp() = default;
    constexpr explicit Timestamp(std::int64_t seconds_since_epoch) : m_seconds(seconds_since_epoch) {}

    constexpr std::int64_t seconds() const noexcept { return m_seconds; }

    /// Parses "YYYY-MM-DDTHH:MM:SSZ" (the trailing Z is optional).
    static std::optional<Timestamp> parse(std::string_view text);

    /// ISO-8601 form, always with a trailing Z.
    std::string to_iso() const;

    friend constexpr auto operator<=>(Timestamp, Timestamp) = default;

private:
    std::int64_t m_seconds = 0;
};

struct IsoWeek {
    int year = 0;
    unsigned week = 0;
    friend constexpr auto operator<=>(const IsoWeek&, const IsoWeek&) = default;
};

IsoWeek iso_week(Timestamp t);

inline constexpr std::int64_t seconds_per_day = 86400;

} // namespace ovid
