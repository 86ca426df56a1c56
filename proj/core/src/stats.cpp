#include "cryptoyield/core/stats.hpp"

#include "cryptoyield/core/csv.hpp"
#include "cryptoyield/error.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

namespace cyield::core {

PriceSeries::PriceSeries(std::vector<Observation> obs) : obs_(std::move(obs)) {
    for (std::size_t i = 0; i < obs_.size(); ++i) {
        if (!(obs_[i].price > 0.0) || !std::isfinite(obs_[i].price))
            throw DomainError(fmt::format("price at index {} must be positive, got {}", i, obs_[i].price));
        if (i > 0 && obs_[i].time <= obs_[i - 1].time)
            throw DataError(fmt::format("timestamps must be strictly increasing (index {})", i));
    }
}

PriceSeries PriceSeries::daily(std::span<const double> prices, Timestamp start) {
    std::vector<Observation> obs;
    obs.reserve(prices.size());
    for (std::size_t i = 0; i < prices.size(); ++i)
        obs.push_back({start + static_cast<Timestamp>(i) * kSecondsPerDay, prices[i]});
    return PriceSeries(std::move(obs));
}

PriceSeries PriceSeries::read_csv(const std::string& path) {
    const auto table = CsvTable::read_file(path);
    const auto tcol = table.column("timestamp");
    const auto pcol = table.column("price");
    std::vector<Observation> obs;
    obs.reserve(table.rows().size());
    for (const auto& row : table.rows()) {
        Timestamp t = 0;
        try {
            t = parse_timestamp(table.text(row, tcol));
        } catch (const DataError& e) {
            throw DataError(fmt::format("{}: {}", table.where(row), e.what()));
        }
        const double p = table.number(row, pcol);
        if (!(p > 0.0)) throw DomainError(fmt::format("{}: price must be positive", table.where(row)));
        if (!obs.empty() && t <= obs.back().time)
            throw DataError(fmt::format("{}: timestamps must be strictly increasing", table.where(row)));
        obs.push_back({t, p});
    }
    return PriceSeries(std::move(obs));
}

void RateConvention::validate() const {
    if (!(days_per_year > 0.0)) throw DomainError("days_per_year must be positive");
}

double ReturnStats::annualized_vol() const { return vol * std::sqrt(periods_per_year); }

std::vector<double> log_returns(const PriceSeries& series) {
    const auto& obs = series.observations();
    if (obs.size() < 2) throw DataError("log returns need at least 2 observations");
    std::vector<double> out;
    out.reserve(obs.size() - 1);
    for (std::size_t i = 0; i + 1 < obs.size(); ++i) out.push_back(std::log(obs[i + 1].price / obs[i].price));
    return out;
}

double periods_per_year(const PriceSeries& series, const RateConvention& convention) {
    convention.validate();
    const auto& obs = series.observations();
    if (obs.size() < 2) throw DataError("spacing needs at least 2 observations");
    const double mean_dt =
        static_cast<double>(obs.back().time - obs.front().time) / static_cast<double>(obs.size() - 1);
    for (std::size_t i = 0; i + 1 < obs.size(); ++i) {
        const double dt = static_cast<double>(obs[i + 1].time - obs[i].time);
        if (std::abs(dt - mean_dt) > 0.01 * mean_dt)
            throw DataError(fmt::format("non-uniform spacing at index {}: {}s vs mean {}s", i, dt, mean_dt));
    }
    return convention.days_per_year * static_cast<double>(kSecondsPerDay) / mean_dt;
}

double realized_vol(const PriceSeries& series, const RateConvention& convention) {
    if (series.size() < 3) throw DataError("realized volatility needs at least 3 observations");
    const double ppy = periods_per_year(series, convention);
    const auto r = log_returns(series);
    return sample_stddev(r) * std::sqrt(ppy);
}

ReturnStats return_stats(const PriceSeries& series, const RateConvention& convention) {
    if (series.size() < 3) throw DataError("return statistics need at least 3 observations");
    const double ppy = periods_per_year(series, convention);
    const auto r = log_returns(series);
    return ReturnStats{sample_mean(r), sample_stddev(r), ppy};
}

double sample_mean(std::span<const double> xs) {
    if (xs.empty()) throw DataError("mean of empty sample");
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double sample_stddev(std::span<const double> xs) {
    if (xs.size() < 2) throw DataError("standard deviation needs at least 2 values");
    const double m = sample_mean(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

double percentile(std::span<const double> values, double p) {
    if (values.empty()) throw DataError("percentile of empty list");
    if (!(p >= 0.0 && p <= 100.0)) throw DomainError(fmt::format("percentile level {} outside [0,100]", p));
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    const double h = static_cast<double>(v.size() - 1) * p / 100.0;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, v.size() - 1);
    const double frac = h - static_cast<double>(lo);
    return v[lo] + frac * (v[hi] - v[lo]);
}

} // namespace cyield::core
