#pragma once

#include "cryptoyield/core/time.hpp"

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace cyield::core {

struct Observation {
    Timestamp time = 0;
    double price = 0.0;  // numeraire units per token
};

// Ordered, strictly positive price observations. Validated on construction.
class PriceSeries {
public:
    PriceSeries() = default;
    explicit PriceSeries(std::vector<Observation> obs);

    // Uniform daily series starting at `start` (convenience for tests and demos).
    static PriceSeries daily(std::span<const double> prices, Timestamp start = 0);

    // CSV with header `timestamp,price`.
    static PriceSeries read_csv(const std::string& path);

    const std::vector<Observation>& observations() const { return obs_; }
    std::size_t size() const { return obs_.size(); }

private:
    std::vector<Observation> obs_;
};

enum class Compounding { Simple, Continuous };

struct RateConvention {
    double days_per_year = 365.0;
    Compounding compounding = Compounding::Continuous;

    void validate() const;
};

// Per-period moments plus the number of periods per year.
struct ReturnStats {
    double mean = 0.0;
    double vol = 0.0;
    double periods_per_year = 1.0;

    double annualized_mean() const { return mean * periods_per_year; }
    double annualized_vol() const;
};

std::vector<double> log_returns(const PriceSeries& series);

// Periods per year implied by the (uniform) spacing of `series`. Throws
// DataError when any interval differs from the mean interval by more than 1%.
double periods_per_year(const PriceSeries& series, const RateConvention& convention = {});

double realized_vol(const PriceSeries& series, const RateConvention& convention = {});

ReturnStats return_stats(const PriceSeries& series, const RateConvention& convention = {});

double sample_mean(std::span<const double> xs);
// n-1 denominator. Requires at least two values.
double sample_stddev(std::span<const double> xs);

// Linear interpolation between closest ranks: rank h = (n-1) * p / 100.
double percentile(std::span<const double> values, double p);

} // namespace cyield::core
