#include "ovid/timestamp.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>

namespace ovid {

namespace {

bool read_number(std::string_view text, std::size_t pos, std::size_t len, int& out) {
    if (pos + len > text.size()) {
        return false;
    }
    const char* first = text.data() + pos;
    const char* last = first + len;
    for (const char* p = first; p != last; ++p) {
        if (*p < '0' || *p > '9') {
            return false;
        }
    }
    return std::from_chars(first, last, out).ec == std::errc{};
}

std::chrono::sys_days to_days(Timestamp t) {
    using namespace std::chrono;
    return floor<days>(sys_seconds{seconds{t.seconds()}});
}

} // namespace

std::optional<Timestamp> Timestamp::parse(std::string_view text) {
    using namespace std::chrono;
    if (text.size() != 19 && !(text.size() == 20 && text.back() == 'Z')) {
        return std::nullopt;
    }
    if (text[4] != '-' || text[7] != '-' || text[10] != 'T' || text[13] != ':' || text[16] != ':') {
        return std::nullopt;
    }
    int y = 0;
    int mo = 0;
    int d = 0;
    int h = 0;
    int mi = 0;
    int s = 0;
    if (!read_number(text, 0, 4, y) || !read_number(text, 5, 2, mo) || !read_number(text, 8, 2, d) ||
        !read_number(text, 11, 2, h) || !read_number(text, 14, 2, mi) || !read_number(text, 17, 2, s)) {
        return std::nullopt;
    }
    const year_month_day date{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!date.ok() || h > 23 || mi > 59 || s > 60) {
        return std::nullopt;
    }
    const auto total = sys_days{date}.time_since_epoch() + hours{h} + minutes{mi} + std::chrono::seconds{s};
    return Timestamp{duration_cast<std::chrono::seconds>(total).count()};
}

std::string Timestamp::to_iso() const {
    using namespace std::chrono;
    const sys_days day_point = to_days(*this);
    const year_month_day date{day_point};
    const std::int64_t rem = m_seconds - duration_cast<std::chrono::seconds>(day_point.time_since_epoch()).count();
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(date.year()),
                  static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()),
                  static_cast<int>(rem / 3600), static_cast<int>((rem / 60) % 60), static_cast<int>(rem % 60));
    return buf;
}

IsoWeek iso_week(Timestamp t) {
    using namespace std::chrono;
    const sys_days day_point = to_days(t);
    // ISO weeks belong to the year of their Thursday.
    const unsigned iso_weekday = weekday{day_point}.iso_encoding(); // Mon=1 .. Sun=7
    const sys_days thursday = day_point + days{4 - static_cast<int>(iso_weekday)};
    const year iso_year = year_month_day{thursday}.year();
    const sys_days jan1 = sys_days{iso_year / January / 1};
    const auto week = static_cast<unsigned>((thursday - jan1).count() / 7 + 1);
    return IsoWeek{static_cast<int>(iso_year), week};
}

} // namespace ovid
