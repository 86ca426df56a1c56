#pragma once

#include "cryptoyield/core/time.hpp"

#include <span>
#include <string>
#include <vector>

namespace cyield::optrates {

using core::Day;
using core::Timestamp;

struct OptionQuote {
    Timestamp quote_time = 0;
    Timestamp expiry = 0;
    double strike = 0.0;
    double call = 0.0;
    double put = 0.0;
    double underlying = 0.0;  // perpetual price

    void validate() const;
};

struct ImpliedRatePoint {
    Timestamp quote_time = 0;
    Timestamp expiry = 0;
    double strike = 0.0;
    double discount_factor = 0.0;
    double rate = 0.0;  // annualized, continuous; NaN for invalid points
    bool valid = false;
};

// Put-call parity: B = (S - C + P) / K. May be non-positive for stale or
// arbitrage-violating quotes.
double implied_discount_factor(const OptionQuote& q);

// -ln(B) / (T - t) with T - t in 365-day years. DomainError for B <= 0 or T <= t.
double implied_rate(double discount_factor, Timestamp quote_time, Timestamp expiry);

// One point per quote; points with B <= 0 are kept but flagged invalid.
ImpliedRatePoint implied_point(const OptionQuote& q);
std::vector<ImpliedRatePoint> implied_points(std::span<const OptionQuote> quotes);

struct DailyRate {
    Day day;
    double mean_rate = 0.0;
    std::size_t valid_points = 0;
    std::size_t invalid_points = 0;
};

// Unweighted mean over the valid points quoted on `day` (UTC). DataError when
// the day has no valid point.
DailyRate aggregate_daily(std::span<const ImpliedRatePoint> points, Day day);

// aggregate_daily for every day that has at least one valid point, ascending.
std::vector<DailyRate> aggregate_all_days(std::span<const ImpliedRatePoint> points);

struct DailyValue {
    Day day;
    double value = 0.0;
};

// Trailing mean over the calendar window (day - window, day]; partial windows
// at the start use whatever days are available.
std::vector<DailyValue> rolling_average(std::span<const DailyValue> daily, int window_days);

// CSV `quote_time,expiry,strike,call,put,underlying`.
std::vector<OptionQuote> read_option_chain_csv(const std::string& path);

} // namespace cyield::optrates
