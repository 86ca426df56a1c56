#include "cryptoyield/optrates.hpp"

#include "cryptoyield/core/csv.hpp"
#include "cryptoyield/error.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <map>

namespace cyield::optrates {

void OptionQuote::validate() const {
    if (!(strike > 0.0) || !(underlying > 0.0)) throw DomainError("strike and underlying must be positive");
    if (!(call >= 0.0) || !(put >= 0.0)) throw DomainError("option prices must be non-negative");
    if (!(expiry > quote_time)) throw DomainError("expiry must follow the quote time");
}

double implied_discount_factor(const OptionQuote& q) {
    q.validate();
    return -(q.call - q.put - q.underlying) / q.strike;
}

double implied_rate(double discount_factor, Timestamp quote_time, Timestamp expiry) {
    if (!(discount_factor > 0.0)) throw DomainError("discount factor must be positive");
    if (!(expiry > quote_time)) throw DomainError("expiry must follow the quote time");
    return -std::log(discount_factor) / core::years_between(quote_time, expiry);
}

ImpliedRatePoint implied_point(const OptionQuote& q) {
    ImpliedRatePoint p{q.quote_time, q.expiry, q.strike, implied_discount_factor(q),
                       std::numeric_limits<double>::quiet_NaN(), false};
    if (p.discount_factor > 0.0) {
        p.rate = implied_rate(p.discount_factor, q.quote_time, q.expiry);
        p.valid = true;
    }
    return p;
}

std::vector<ImpliedRatePoint> implied_points(std::span<const OptionQuote> quotes) {
    std::vector<ImpliedRatePoint> out;
    out.reserve(quotes.size());
    for (const auto& q : quotes) out.push_back(implied_point(q));
    return out;
}

DailyRate aggregate_daily(std::span<const ImpliedRatePoint> points, Day day) {
    DailyRate d{day, 0.0, 0, 0};
    double sum = 0.0;
    for (const auto& p : points) {
        if (core::day_of(p.quote_time) != day) continue;
        if (!p.valid) {
            ++d.invalid_points;
            continue;
        }
        sum += p.rate;
        ++d.valid_points;
    }
    if (d.valid_points == 0)
        throw DataError(fmt::format("no valid implied-rate points on {}", core::format_day(day)));
    d.mean_rate = sum / static_cast<double>(d.valid_points);
    return d;
}

std::vector<DailyRate> aggregate_all_days(std::span<const ImpliedRatePoint> points) {
    std::map<Day, std::pair<double, std::pair<std::size_t, std::size_t>>> acc;
    for (const auto& p : points) {
        auto& slot = acc[core::day_of(p.quote_time)];
        if (p.valid) {
            slot.first += p.rate;
            ++slot.second.first;
        } else {
            ++slot.second.second;
        }
    }
    std::vector<DailyRate> out;
    for (const auto& [day, slot] : acc) {
        if (slot.second.first == 0) continue;
        out.push_back({day, slot.first / static_cast<double>(slot.second.first), slot.second.first, slot.second.second});
    }
    return out;
}

std::vector<DailyValue> rolling_average(std::span<const DailyValue> daily, int window_days) {
    if (window_days < 1) throw DomainError("rolling window must be at least one day");
    for (std::size_t i = 1; i < daily.size(); ++i)
        if (!(daily[i - 1].day < daily[i].day)) throw DataError("daily series must be strictly increasing in day");

    std::vector<DailyValue> out;
    out.reserve(daily.size());
    std::size_t lo = 0;
    for (std::size_t i = 0; i < daily.size(); ++i) {
        while (daily[lo].day <= daily[i].day - std::chrono::days{window_days}) ++lo;
        double sum = 0.0;
        for (std::size_t j = lo; j <= i; ++j) sum += daily[j].value;
        out.push_back({daily[i].day, sum / static_cast<double>(i - lo + 1)});
    }
    return out;
}

std::vector<OptionQuote> read_option_chain_csv(const std::string& path) {
    const auto t = core::CsvTable::read_file(path);
    const auto cq = t.column("quote_time"), ce = t.column("expiry"), ck = t.column("strike"), cc = t.column("call"),
               cp = t.column("put"), cs = t.column("underlying");
    std::vector<OptionQuote> out;
    out.reserve(t.rows().size());
    for (const auto& row : t.rows()) {
        OptionQuote q;
        try {
            q.quote_time = core::parse_timestamp(t.text(row, cq));
            q.expiry = core::parse_timestamp(t.text(row, ce));
        } catch (const DataError& e) {
            throw DataError(fmt::format("{}: {}", t.where(row), e.what()));
        }
        q.strike = t.number(row, ck);
        q.call = t.number(row, cc);
        q.put = t.number(row, cp);
        q.underlying = t.number(row, cs);
        try {
            q.validate();
        } catch (const DomainError& e) {
            throw DomainError(fmt::format("{}: {}", t.where(row), e.what()));
        }
        out.push_back(q);
    }
    return out;
}

} // namespace cyield::optrates
