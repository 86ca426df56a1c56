#pragma once

#include <cstddef>

namespace cyield::lending {

// Typical initial over-collateralization (collateral value / borrowed value).
inline constexpr double kDefaultCollateralization = 1.5;

struct LoanTerms {
    double collateral = 0.0;  // A: numeraire value of token-alpha collateral
    double repayment = 0.0;   // B: numeraire value of token-beta due at maturity
    double sigma_alpha = 0.0;
    double sigma_beta = 0.0;
    double rho = 0.0;
    double r_alpha = 0.0;  // annualized token rates (continuous)
    double r_beta = 0.0;
    double maturity = 1.0;  // years

    void validate() const;
};

// Intermediate quantities of the exchange-option formula, kept for audit output.
struct MargrabeBreakdown {
    double sigma = 0.0;  // combined volatility of A/B
    double d1 = 0.0;
    double d2 = 0.0;
    double discount_alpha = 1.0;  // exp(-r_alpha T)
    double discount_beta = 1.0;   // exp(-r_beta T)
    double value = 0.0;
    bool degenerate = false;  // sigma * sqrt(T) == 0, intrinsic value of forwards
};

struct LoanValuation {
    double borrower_value = 0.0;  // claim on Max[A, B]
    double lender_value = 0.0;    // claim on Min[A, B] (+ liquidation penalty)
    double exchange_option_value = 0.0;
    double liquidation_value = 0.0;
};

double combined_sigma(const LoanTerms& terms);

/// Value of Max[0, A - B] at maturity with A and B correlated geometric
/// Brownian motions:
///
///   exp(-r_a T) A N(d1) - exp(-r_b T) B N(d2)
///   d1 = (ln(A/B) + (r_b - r_a) T + sigma^2 T / 2) / (sigma sqrt(T)),  d2 = d1 - sigma sqrt(T)
///   sigma^2 = s_a^2 - 2 rho s_a s_b + s_b^2
///
/// The second term carries a minus sign: with a plus sign the price would not
/// reduce to A - B in the zero-volatility in-the-money case, and the Monte
/// Carlo oracle confirms the minus. Rates enter multiplied by T.
MargrabeBreakdown margrabe_exchange(const LoanTerms& terms);
double margrabe_exchange_value(const LoanTerms& terms);

// borrower = exp(-r_b T) B + exchange option; lender = discounted A + discounted B - borrower.
LoanValuation loan_values(const LoanTerms& terms);

struct NumeraireLeg {
    double repayment = 0.0;  // B
    double sigma_beta = 0.0;
    double r_beta = 0.0;
    double maturity = 1.0;
};

/// Borrower value when the collateral is the numeraire itself (zero vol and
/// rate): exp(-r_b T) B + A N(d) - exp(-r_b T) B N(d - s_b sqrt(T)) with
/// d = (ln(A/B) + r_b T + s_b^2 T / 2) / (s_b sqrt(T)). Falls back to
/// max(A, exp(-r_b T) B) at zero volatility.
double numeraire_loan_value(double collateral, const NumeraireLeg& leg);

struct OneTouchSpec {
    double spot_ratio = 0.0;  // current collateralization ratio
    double barrier = 0.0;     // ratio that triggers payment, below spot
    double payout = 0.0;      // numeraire amount paid at the hitting time
    double sigma = 0.0;
    double rate = 0.0;   // discount rate
    double drift = 0.0;  // drift of the ratio under the pricing measure
    double maturity = 1.0;
};

/// Down-and-in one-touch paying `payout` at the first time the ratio (a GBM)
/// reaches the barrier, by the reflection principle. Returns `payout` when the
/// barrier is already breached. Zero sigma is handled as a deterministic path.
double one_touch_value(const OneTouchSpec& spec);

struct LiquidationSpec {
    double barrier = 1.2;   // collateralization ratio at which liquidation fires
    double penalty = 0.08;  // fraction of the repayment notional paid to the lender

    void validate() const;
};

/// Loan value with a one-touch liquidation penalty added to the lender's claim
/// (barrier on A/B with drift r_b - r_a, discounting at r_b). Ignores margin
/// replenishment after the trigger.
LoanValuation loan_value_with_liquidation(const LoanTerms& terms, const LiquidationSpec& liquidation);

// Piecewise-linear "hockey stick" borrow rate.
struct UtilizationCurve {
    double kink = 0.80;
    double base_rate = 0.0;
    double slope_low = 0.04;
    double slope_high = 0.75;

    void validate() const;
};

double utilization_rate(const UtilizationCurve& curve, double utilization);

// Total exposure from re-lending collateral n times with haircut x:
// sum_{i<n} (1 - x)^i, increasing to 1 / x.
double recycling_leverage(double haircut, std::size_t chain_length);
double recycling_leverage_limit(double haircut);

} // namespace cyield::lending
