#include "drseg/timeaxis.hpp"

#include <cstdio>

namespace drseg {

// Howard Hinnant's civil-date algorithms.
DayStamp days_from_civil(const CivilDate& d) {
    const int y = d.year - (d.month <= 2);
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy =
        (153u * (static_cast<unsigned>(d.month) + (d.month > 2 ? -3 : 9)) + 2) / 5 +
        static_cast<unsigned>(d.day) - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return static_cast<DayStamp>(era) * 146097 + static_cast<DayStamp>(doe) - 719468;
}

CivilDate civil_from_days(DayStamp days) {
    days += 719468;
    const DayStamp era = (days >= 0 ? days : days - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(days - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const int y = static_cast<int>(yoe) + static_cast<int>(era) * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned day = doy - (153 * mp + 2) / 5 + 1;
    const unsigned month = mp + (mp < 10 ? 3 : -9);
    return CivilDate{y + (month <= 2), static_cast<int>(month), static_cast<int>(day)};
}

int weekday(DayStamp days) {
    // 1970-01-01 was a Thursday
    const auto w = (days + 3) % 7;
    return static_cast<int>(w < 0 ? w + 7 : w);
}

namespace {

bool parse_int(std::string_view s, std::size_t pos, std::size_t len, int& out) {
    if (pos + len > s.size()) return false;
    int v = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
        const char c = s[i];
        if (c < '0' || c > '9') return false;
        v = v * 10 + (c - '0');
    }
    out = v;
    return true;
}

bool parse_civil(std::string_view s, CivilDate& d) {
    if (s.size() < 10 || s[4] != '-' || s[7] != '-') return false;
    int y = 0, m = 0, day = 0;
    if (!parse_int(s, 0, 4, y) || !parse_int(s, 5, 2, m) || !parse_int(s, 8, 2, day))
        return false;
    if (m < 1 || m > 12 || day < 1 || day > 31) return false;
    // round-trip check rejects impossible dates like Feb 30
    const CivilDate cand{y, m, day};
    const CivilDate back = civil_from_days(days_from_civil(cand));
    if (back.year != y || back.month != m || back.day != day) return false;
    d = cand;
    return true;
}

} // namespace

std::optional<HourStamp> parse_hour_stamp(std::string_view text) {
    if (text.size() != 19 || text[10] != 'T') return std::nullopt;
    CivilDate d;
    if (!parse_civil(text.substr(0, 10), d)) return std::nullopt;
    int hh = 0;
    if (!parse_int(text, 11, 2, hh) || hh > 23) return std::nullopt;
    if (text.substr(13) != ":00:00") return std::nullopt;
    return hour_stamp(d, hh);
}

std::optional<DayStamp> parse_date(std::string_view text) {
    if (text.size() != 10) return std::nullopt;
    CivilDate d;
    if (!parse_civil(text, d)) return std::nullopt;
    return days_from_civil(d);
}

std::string format_hour_stamp(HourStamp t) {
    const CivilDate d = civil_from_days(day_of(t));
    char buf[24];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:00:00", d.year, d.month, d.day,
                  hour_of_day(t));
    return buf;
}

std::string format_date(DayStamp day) {
    const CivilDate d = civil_from_days(day);
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", d.year, d.month, d.day);
    return buf;
}

} // namespace drseg
