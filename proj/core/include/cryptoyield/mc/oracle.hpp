#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace cyield::mc {

// Two correlated geometric Brownian motions.
struct GbmSpec {
    double s0_a = 1.0;
    double s0_b = 1.0;
    double sigma_a = 0.0;
    double sigma_b = 0.0;
    double rho = 0.0;
    double drift_a = 0.0;  // annualized
    double drift_b = 0.0;
    double maturity = 1.0;
    std::size_t paths = 100000;
    std::uint64_t seed = 1;
    bool antithetic = true;
    unsigned workers = 0;  // 0: hardware concurrency; never changes results

    void validate() const;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t paths = 0;
};

struct TerminalPair {
    double a = 0.0;
    double b = 0.0;
};

// Exact lognormal terminal values. With antithetic sampling, paths 2i and
// 2i+1 use opposite normal draws.
std::vector<TerminalPair> simulate_terminal(const GbmSpec& spec);

using Payoff = std::function<double(double a_terminal, double b_terminal)>;

// exp(-r T) * mean(payoff) with its standard error (antithetic pairs count as
// one independent sample).
McEstimate price_payoff(const GbmSpec& spec, const Payoff& payoff, double discount_rate);

// Single GBM for the collateralization ratio.
struct RatioProcessSpec {
    double s0 = 1.0;
    double sigma = 0.0;
    double drift = 0.0;
    double maturity = 1.0;
    std::size_t steps = 1000;
    std::size_t paths = 100000;
    std::uint64_t seed = 1;
    bool antithetic = true;
    bool bridge_correction = true;
    unsigned workers = 0;

    void validate() const;
};

/// Value of `payout` paid when the ratio first falls to `barrier`, discounted
/// at `rate` from the hitting time.
///
/// Each path is time-stepped on the exact lognormal transition. With the bridge
/// correction, the probability that the continuous path dipped below the
/// barrier between two grid points (both above it) is
/// exp(-2 ln(x0/H) ln(x1/H) / (sigma^2 dt)); the estimator accumulates
/// survival-weighted hit probabilities, discounting each at the step midpoint.
/// Without the correction only grid points are monitored.
McEstimate first_passage_value(const RatioProcessSpec& spec, double barrier, double payout, double rate);

} // namespace cyield::mc
