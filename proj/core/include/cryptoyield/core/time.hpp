#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>

namespace cyield::core {

// UTC seconds since the Unix epoch.
using Timestamp = std::int64_t;
using Day = std::chrono::sys_days;

inline constexpr std::int64_t kSecondsPerDay = 86400;

// Accepts integer epoch seconds, `YYYY-MM-DD`, or `YYYY-MM-DD[T ]HH:MM[:SS][Z]`.
// Throws DataError on anything else.
Timestamp parse_timestamp(std::string_view text);

Day parse_day(std::string_view text);

Day day_of(Timestamp t);
Timestamp start_of(Day d);

// `YYYY-MM-DD`
std::string format_day(Day d);
// `YYYY-MM-DDTHH:MM:SSZ`
std::string format_timestamp(Timestamp t);

// Elapsed time in years under a days-per-year convention.
inline double years_between(Timestamp from, Timestamp to, double days_per_year = 365.0) {
    return static_cast<double>(to - from) / (days_per_year * static_cast<double>(kSecondsPerDay));
}

} // namespace cyield::core
