#include "cryptoyield/lending.hpp"

#include "cryptoyield/core/normal.hpp"
#include "cryptoyield/error.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

namespace cyield::lending {

using core::normal_cdf;

namespace {

constexpr double kDegenerateVol = 1e-14;

bool finite_all(std::initializer_list<double> xs) {
    return std::all_of(xs.begin(), xs.end(), [](double v) { return std::isfinite(v); });
}

} // namespace

void LoanTerms::validate() const {
    if (!finite_all({collateral, repayment, sigma_alpha, sigma_beta, rho, r_alpha, r_beta, maturity}))
        throw DomainError("loan terms must be finite");
    if (!(collateral > 0.0) || !(repayment > 0.0)) throw DomainError("collateral and repayment must be positive");
    if (sigma_alpha < 0.0 || sigma_beta < 0.0) throw DomainError("volatilities must be non-negative");
    if (rho < -1.0 || rho > 1.0) throw DomainError(fmt::format("correlation {} outside [-1, 1]", rho));
    if (!(maturity > 0.0)) throw DomainError("maturity must be positive");
}

double combined_sigma(const LoanTerms& t) {
    const double var =
        t.sigma_alpha * t.sigma_alpha - 2.0 * t.rho * t.sigma_alpha * t.sigma_beta + t.sigma_beta * t.sigma_beta;
    return std::sqrt(std::max(var, 0.0));
}

MargrabeBreakdown margrabe_exchange(const LoanTerms& t) {
    t.validate();
    MargrabeBreakdown m;
    m.sigma = combined_sigma(t);
    m.discount_alpha = std::exp(-t.r_alpha * t.maturity);
    m.discount_beta = std::exp(-t.r_beta * t.maturity);
    const double fwd_a = m.discount_alpha * t.collateral;
    const double fwd_b = m.discount_beta * t.repayment;
    const double vol_t = m.sigma * std::sqrt(t.maturity);
    if (vol_t < kDegenerateVol) {
        m.degenerate = true;
        const bool itm = fwd_a > fwd_b;
        m.d1 = m.d2 = itm ? HUGE_VAL : -HUGE_VAL;
        m.value = std::max(fwd_a - fwd_b, 0.0);
        return m;
    }
    m.d1 = (std::log(t.collateral / t.repayment) + (t.r_beta - t.r_alpha) * t.maturity + 0.5 * vol_t * vol_t) / vol_t;
    m.d2 = m.d1 - vol_t;
    m.value = std::max(fwd_a * normal_cdf(m.d1) - fwd_b * normal_cdf(m.d2), 0.0);
    return m;
}

double margrabe_exchange_value(const LoanTerms& terms) { return margrabe_exchange(terms).value; }

LoanValuation loan_values(const LoanTerms& t) {
    const auto m = margrabe_exchange(t);
    LoanValuation v;
    v.exchange_option_value = m.value;
    v.borrower_value = m.discount_beta * t.repayment + m.value;
    v.lender_value = m.discount_alpha * t.collateral + m.discount_beta * t.repayment - v.borrower_value;
    return v;
}

double numeraire_loan_value(double collateral, const NumeraireLeg& leg) {
    if (!finite_all({collateral, leg.repayment, leg.sigma_beta, leg.r_beta, leg.maturity}))
        throw DomainError("numeraire leg must be finite");
    if (!(collateral > 0.0) || !(leg.repayment > 0.0)) throw DomainError("amounts must be positive");
    if (leg.sigma_beta < 0.0) throw DomainError("volatility must be non-negative");
    if (!(leg.maturity > 0.0)) throw DomainError("maturity must be positive");

    const double disc_b = std::exp(-leg.r_beta * leg.maturity) * leg.repayment;
    const double vol_t = leg.sigma_beta * std::sqrt(leg.maturity);
    if (vol_t < kDegenerateVol) return std::max(collateral, disc_b);
    const double d = (std::log(collateral / leg.repayment) + leg.r_beta * leg.maturity + 0.5 * vol_t * vol_t) / vol_t;
    const double option = std::max(collateral * normal_cdf(d) - disc_b * normal_cdf(d - vol_t), 0.0);
    return disc_b + option;
}

double one_touch_value(const OneTouchSpec& s) {
    if (!finite_all({s.spot_ratio, s.barrier, s.payout, s.sigma, s.rate, s.drift, s.maturity}))
        throw DomainError("one-touch inputs must be finite");
    if (!(s.barrier > 0.0) || !(s.spot_ratio > 0.0)) throw DomainError("spot ratio and barrier must be positive");
    if (!(s.payout >= 0.0)) throw DomainError("payout must be non-negative");
    if (s.sigma < 0.0) throw DomainError("volatility must be non-negative");
    if (!(s.maturity > 0.0)) throw DomainError("maturity must be positive");

    if (s.spot_ratio <= s.barrier) return s.payout;

    const double log_dist = std::log(s.barrier / s.spot_ratio);  // < 0
    if (s.sigma * std::sqrt(s.maturity) < kDegenerateVol) {
        if (s.drift >= 0.0) return 0.0;
        const double hit = log_dist / s.drift;
        return hit <= s.maturity ? s.payout * std::exp(-s.rate * hit) : 0.0;
    }

    const double var = s.sigma * s.sigma;
    const double mu = (s.drift - 0.5 * var) / var;
    const double disc = mu * mu + 2.0 * s.rate / var;
    if (disc < 0.0) throw DomainError("discount rate too negative for the pay-at-hit closed form");
    const double lambda = std::sqrt(disc);
    const double vol_t = s.sigma * std::sqrt(s.maturity);
    const double z = log_dist / vol_t + lambda * vol_t;
    const double ratio = s.barrier / s.spot_ratio;
    const double value = std::pow(ratio, mu + lambda) * normal_cdf(z) +
                         std::pow(ratio, mu - lambda) * normal_cdf(z - 2.0 * lambda * vol_t);
    return std::clamp(s.payout * value, 0.0, s.payout);
}

void LiquidationSpec::validate() const {
    if (!(barrier > 0.0) || !std::isfinite(barrier)) throw DomainError("liquidation barrier must be positive");
    if (!(penalty >= 0.0 && penalty <= 1.0)) throw DomainError("liquidation penalty must lie in [0, 1]");
}

LoanValuation loan_value_with_liquidation(const LoanTerms& t, const LiquidationSpec& liq) {
    liq.validate();
    LoanValuation v = loan_values(t);
    if (liq.penalty == 0.0) return v;
    const OneTouchSpec ot{t.collateral / t.repayment, liq.barrier, liq.penalty * t.repayment,
                          combined_sigma(t), t.r_beta, t.r_beta - t.r_alpha, t.maturity};
    v.liquidation_value = one_touch_value(ot);
    v.lender_value += v.liquidation_value;
    v.borrower_value -= v.liquidation_value;
    return v;
}

void UtilizationCurve::validate() const {
    if (!(kink > 0.0 && kink < 1.0)) throw DomainError("kink must lie in (0, 1)");
    if (slope_low < 0.0 || slope_high < 0.0) throw DomainError("slopes must be non-negative");
    if (!(slope_high > slope_low)) throw DomainError("slope above the kink must exceed the slope below");
    if (!std::isfinite(base_rate)) throw DomainError("base rate must be finite");
}

double utilization_rate(const UtilizationCurve& c, double u) {
    c.validate();
    if (!(u >= 0.0 && u <= 1.0)) throw DomainError(fmt::format("utilization {} outside [0, 1]", u));
    if (u <= c.kink) return c.base_rate + c.slope_low * u;
    return c.base_rate + c.slope_low * c.kink + c.slope_high * (u - c.kink);
}

double recycling_leverage(double haircut, std::size_t chain_length) {
    if (!(haircut > 0.0 && haircut < 1.0)) throw DomainError("haircut must lie in (0, 1)");
    if (chain_length < 1) throw DomainError("chain length must be at least 1");
    double total = 0.0;
    double term = 1.0;
    for (std::size_t i = 0; i < chain_length; ++i) {
        total += term;
        term *= 1.0 - haircut;
    }
    return total;
}

double recycling_leverage_limit(double haircut) {
    if (!(haircut > 0.0 && haircut < 1.0)) throw DomainError("haircut must lie in (0, 1)");
    return 1.0 / haircut;
}

} // namespace cyield::lending
