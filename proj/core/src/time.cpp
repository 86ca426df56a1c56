#include "cryptoyield/core/time.hpp"

#include "cryptoyield/error.hpp"

#include <cctype>
#include <charconv>
#include <fmt/format.h>

namespace cyield::core {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

int to_int(std::string_view s, std::string_view whole) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw DataError(fmt::format("malformed timestamp '{}'", whole));
    return v;
}

} // namespace

Timestamp parse_timestamp(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.empty()) throw DataError("empty timestamp");

    std::string_view digits = text;
    if (digits.front() == '-') digits.remove_prefix(1);
    if (all_digits(digits)) {
        Timestamp v = 0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc{}) throw DataError(fmt::format("malformed timestamp '{}'", text));
        return v;
    }

    if (text.size() < 10 || text[4] != '-' || text[7] != '-')
        throw DataError(fmt::format("malformed timestamp '{}'", text));
    const int y = to_int(text.substr(0, 4), text);
    const int m = to_int(text.substr(5, 2), text);
    const int d = to_int(text.substr(8, 2), text);
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                                          std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) throw DataError(fmt::format("invalid calendar date '{}'", text));

    Timestamp secs = start_of(Day{ymd});
    std::string_view rest = text.substr(10);
    if (rest.empty()) return secs;
    if (rest.front() != 'T' && rest.front() != ' ')
        throw DataError(fmt::format("malformed timestamp '{}'", text));
    rest.remove_prefix(1);
    if (!rest.empty() && (rest.back() == 'Z' || rest.back() == 'z')) rest.remove_suffix(1);
    if (rest.size() == 9 && rest.substr(5) == "+00:00") rest = rest.substr(0, 5);
    if (rest.size() == 14 && rest.substr(8) == "+00:00") rest = rest.substr(0, 8);

    int hh = 0, mm = 0, ss = 0;
    if (rest.size() == 5 && rest[2] == ':') {
        hh = to_int(rest.substr(0, 2), text);
        mm = to_int(rest.substr(3, 2), text);
    } else if (rest.size() == 8 && rest[2] == ':' && rest[5] == ':') {
        hh = to_int(rest.substr(0, 2), text);
        mm = to_int(rest.substr(3, 2), text);
        ss = to_int(rest.substr(6, 2), text);
    } else {
        throw DataError(fmt::format("malformed time of day in '{}'", text));
    }
    if (hh > 23 || mm > 59 || ss > 60) throw DataError(fmt::format("time of day out of range in '{}'", text));
    return secs + hh * 3600 + mm * 60 + ss;
}

Day parse_day(std::string_view text) {
    const Timestamp t = parse_timestamp(text);
    if (t % kSecondsPerDay != 0) throw DataError(fmt::format("'{}' is not a calendar day", text));
    return day_of(t);
}

Day day_of(Timestamp t) {
    Timestamp q = t / kSecondsPerDay;
    if (t % kSecondsPerDay < 0) --q;
    return Day{std::chrono::days{q}};
}

Timestamp start_of(Day d) {
    return static_cast<Timestamp>(d.time_since_epoch().count()) * kSecondsPerDay;
}

std::string format_day(Day d) {
    const std::chrono::year_month_day ymd{d};
    return fmt::format("{:04d}-{:02d}-{:02d}", static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                       static_cast<unsigned>(ymd.day()));
}

std::string format_timestamp(Timestamp t) {
    const Day d = day_of(t);
    const Timestamp s = t - start_of(d);
    return fmt::format("{}T{:02d}:{:02d}:{:02d}Z", format_day(d), s / 3600, (s / 60) % 60, s % 60);
}

} // namespace cyield::core
