#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace drseg {

// Naive local time, no zone handling. Hours and days count from 1970-01-01.
using HourStamp = std::int64_t;
using DayStamp = std::int64_t;

struct CivilDate {
    int year = 1970;
    int month = 1; // 1..12
    int day = 1;   // 1..31
};

DayStamp days_from_civil(const CivilDate& d);
CivilDate civil_from_days(DayStamp days);

inline HourStamp hour_stamp(const CivilDate& d, int hour) {
    return days_from_civil(d) * 24 + hour;
}
inline DayStamp day_of(HourStamp t) {
    // floor division; timestamps may predate the epoch in synthetic data
    return t >= 0 ? t / 24 : (t - 23) / 24;
}
inline int hour_of_day(HourStamp t) {
    const auto h = t % 24;
    return static_cast<int>(h < 0 ? h + 24 : h);
}

// 0 = Monday .. 6 = Sunday
int weekday(DayStamp days);

// Strict "YYYY-MM-DDTHH:00:00" (hour-aligned) and "YYYY-MM-DD".
std::optional<HourStamp> parse_hour_stamp(std::string_view text);
std::optional<DayStamp> parse_date(std::string_view text);

std::string format_hour_stamp(HourStamp t);
std::string format_date(DayStamp d);

} // namespace drseg
