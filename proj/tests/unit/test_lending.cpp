#include <doctest.h>

#include "cryptoyield/error.hpp"
#include "cryptoyield/lending.hpp"
#include "cryptoyield/mc/oracle.hpp"

#include "generators.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <cmath>

using namespace cyield;
using namespace cyield::lending;

namespace {

LoanTerms base_terms() {
    LoanTerms t;
    t.collateral = 1.0;
    t.repayment = 1.0;
    t.sigma_alpha = 0.8;
    t.sigma_beta = 0.0;
    t.rho = 0.0;
    t.r_alpha = 0.0;
    t.r_beta = 0.0;
    t.maturity = 1.0;
    return t;
}

// exp(-r T) E[max(A_T - B_T, 0)] under the numeraire measure at rate r.
mc::McEstimate exchange_by_simulation(const LoanTerms& t, double r, std::uint64_t seed, std::size_t paths) {
    mc::GbmSpec g;
    g.s0_a = t.collateral;
    g.s0_b = t.repayment;
    g.sigma_a = t.sigma_alpha;
    g.sigma_b = t.sigma_beta;
    g.rho = t.rho;
    g.drift_a = r - t.r_alpha;
    g.drift_b = r - t.r_beta;
    g.maturity = t.maturity;
    g.paths = paths;
    g.seed = seed;
    return mc::price_payoff(g, [](double a, double b) { return std::max(a - b, 0.0); }, r);
}

} // namespace

TEST_CASE("margrabe worked example") {
    const auto t = base_terms();
    CHECK(combined_sigma(t) == doctest::Approx(0.8));
    CHECK(margrabe_exchange_value(t) == doctest::Approx(0.3108434832).epsilon(1e-9));
    const auto b = margrabe_exchange(t);
    CHECK(b.d1 == doctest::Approx(0.4));
    CHECK(b.d2 == doctest::Approx(-0.4));
    CHECK_FALSE(b.degenerate);
}

TEST_CASE("margrabe carries the T factor on rates") {
    LoanTerms t = base_terms();
    t.collateral = 1.2;
    t.sigma_alpha = 0.5;
    t.sigma_beta = 0.3;
    t.rho = 0.4;
    t.r_alpha = 0.03;
    t.r_beta = 0.08;
    t.maturity = 0.5;
    const auto est = exchange_by_simulation(t, 0.05, 77, 400000);
    CHECK(std::abs(margrabe_exchange_value(t) - est.mean) < 4.0 * est.std_error);
    const auto b = margrabe_exchange(t);
    CHECK(b.discount_alpha == doctest::Approx(std::exp(-0.015)).epsilon(1e-15));
    CHECK(b.discount_beta == doctest::Approx(std::exp(-0.04)).epsilon(1e-15));
}

TEST_CASE("margrabe zero volatility is intrinsic on forwards") {
    LoanTerms t = base_terms();
    t.sigma_alpha = 0.0;
    t.collateral = 1.5;
    t.r_beta = 0.05;
    t.maturity = 2.0;
    CHECK(margrabe_exchange(t).degenerate);
    CHECK(margrabe_exchange_value(t) == doctest::Approx(1.5 - std::exp(-0.1)).epsilon(1e-15));
    t.collateral = 0.5;
    CHECK(margrabe_exchange_value(t) == 0.0);
    SUBCASE("perfectly correlated equal vols") {
        LoanTerms c = base_terms();
        c.collateral = 2.0;
        c.sigma_beta = 0.8;
        c.rho = 1.0;
        CHECK(margrabe_exchange_value(c) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("margrabe properties") {
    gen::Rng rng(2024);
    for (int trial = 0; trial < 300; ++trial) {
        LoanTerms t;
        t.collateral = rng.log_uniform(0.2, 5.0);
        t.repayment = rng.log_uniform(0.2, 5.0);
        t.sigma_alpha = rng.uniform(0.05, 1.5);
        t.sigma_beta = rng.uniform(0.0, 1.0);
        t.rho = rng.uniform(-0.9, 0.9);
        t.r_alpha = rng.uniform(0.0, 0.1);
        t.r_beta = rng.uniform(0.0, 0.1);
        t.maturity = rng.uniform(0.05, 3.0);
        const double v = margrabe_exchange_value(t);
        const double fa = std::exp(-t.r_alpha * t.maturity) * t.collateral;
        const double fb = std::exp(-t.r_beta * t.maturity) * t.repayment;

        // bounds: intrinsic on forwards <= value <= discounted collateral
        CHECK(v >= std::max(fa - fb, 0.0) - 1e-12);
        CHECK(v <= fa + 1e-12);

        // exchange parity: C(A, B) - C(B, A) = fA - fB
        LoanTerms swapped = t;
        std::swap(swapped.collateral, swapped.repayment);
        std::swap(swapped.sigma_alpha, swapped.sigma_beta);
        std::swap(swapped.r_alpha, swapped.r_beta);
        CHECK(v - margrabe_exchange_value(swapped) == doctest::Approx(fa - fb).epsilon(1e-10).scale(1.0));

        // homogeneous of degree one
        const double c = rng.log_uniform(0.1, 10.0);
        LoanTerms scaled = t;
        scaled.collateral *= c;
        scaled.repayment *= c;
        CHECK(margrabe_exchange_value(scaled) == doctest::Approx(c * v).epsilon(1e-10));

        // increasing in A and in combined sigma
        LoanTerms more_a = t;
        more_a.collateral *= 1.01;
        CHECK(margrabe_exchange_value(more_a) >= v);
        LoanTerms lower_rho = t;
        lower_rho.rho = t.rho - 0.05;
        CHECK(margrabe_exchange_value(lower_rho) >= v - 1e-14);

        // lender + borrower = discounted A + discounted B
        const auto lv = loan_values(t);
        CHECK(lv.borrower_value + lv.lender_value == doctest::Approx(fa + fb).epsilon(1e-12));
        CHECK(lv.borrower_value >= fb - 1e-12);
        CHECK(lv.lender_value <= std::min(fa, fb) + 1e-12);
    }
}

TEST_CASE("loan terms validation") {
    LoanTerms t = base_terms();
    t.collateral = 0.0;
    CHECK_THROWS_AS(t.validate(), DomainError);
    t = base_terms();
    t.rho = 1.5;
    CHECK_THROWS_AS(margrabe_exchange_value(t), DomainError);
    t = base_terms();
    t.maturity = -1.0;
    CHECK_THROWS_AS(loan_values(t), DomainError);
    t = base_terms();
    t.sigma_alpha = -0.1;
    CHECK_THROWS_AS(loan_values(t), DomainError);
}

TEST_CASE("numeraire collateral") {
    const NumeraireLeg leg{100.0, 0.8, 0.0, 0.5};
    CHECK(numeraire_loan_value(150.0, leg) == doctest::Approx(159.40471453171314).epsilon(1e-12));

    gen::Rng rng(6);
    for (int trial = 0; trial < 200; ++trial) {
        const double a = rng.log_uniform(20, 500);
        const NumeraireLeg l{rng.log_uniform(20, 500), rng.uniform(0.05, 1.5), rng.uniform(0, 0.1),
                             rng.uniform(0.05, 2.0)};
        LoanTerms t;
        t.collateral = a;
        t.repayment = l.repayment;
        t.sigma_alpha = 0.0;
        t.sigma_beta = l.sigma_beta;
        t.r_beta = l.r_beta;
        t.maturity = l.maturity;
        CHECK(numeraire_loan_value(a, l) == doctest::Approx(loan_values(t).borrower_value).epsilon(1e-12));
    }
    CHECK(numeraire_loan_value(150.0, NumeraireLeg{100.0, 0.0, 0.0, 0.5}) == 150.0);
}

TEST_CASE("one_touch_value") {
    OneTouchSpec s{1.5, 1.2, 0.08, 0.8, 0.0, 0.0, 1.0};
    CHECK(one_touch_value(s) == doctest::Approx(0.06871372271014692).epsilon(1e-12));
    s.rate = 0.05;
    s.drift = 0.02;
    CHECK(one_touch_value(s) == doctest::Approx(0.06771055466853022).epsilon(1e-12));

    SUBCASE("already breached pays immediately") {
        OneTouchSpec b{1.1, 1.2, 0.08, 0.8, 0.05, 0.0, 1.0};
        CHECK(one_touch_value(b) == 0.08);
    }
    SUBCASE("zero volatility follows the drift deterministically") {
        OneTouchSpec d{1.5, 1.2, 1.0, 0.0, 0.1, -0.5, 1.0};
        // hits at t = ln(1.5/1.2)/0.5
        const double t = std::log(1.25) / 0.5;
        CHECK(one_touch_value(d) == doctest::Approx(std::exp(-0.1 * t)).epsilon(1e-14));
        d.drift = 0.1;
        CHECK(one_touch_value(d) == 0.0);
    }
    SUBCASE("agrees with first-passage quadrature") {
        gen::Rng rng(31);
        for (int trial = 0; trial < 40; ++trial) {
            OneTouchSpec p;
            p.spot_ratio = rng.uniform(1.05, 3.0);
            p.barrier = 1.0;
            p.payout = 1.0;
            p.sigma = rng.uniform(0.1, 1.5);
            p.rate = rng.uniform(0.0, 0.1);
            p.drift = rng.uniform(-0.1, 0.1);
            p.maturity = rng.uniform(0.1, 3.0);
            const double q = oracle::one_touch_by_quadrature(p.spot_ratio, p.barrier, p.payout, p.sigma, p.rate,
                                                             p.drift, p.maturity);
            CHECK(one_touch_value(p) == doctest::Approx(q).epsilon(1e-7).scale(1.0));
        }
    }
    SUBCASE("monotone") {
        const double base = one_touch_value(OneTouchSpec{1.5, 1.2, 1.0, 0.8, 0.0, 0.0, 1.0});
        CHECK(one_touch_value(OneTouchSpec{1.6, 1.2, 1.0, 0.8, 0.0, 0.0, 1.0}) < base);
        CHECK(one_touch_value(OneTouchSpec{1.5, 1.2, 1.0, 0.9, 0.0, 0.0, 1.0}) > base);
        CHECK(one_touch_value(OneTouchSpec{1.5, 1.2, 1.0, 0.8, 0.0, 0.0, 2.0}) > base);
    }
}

TEST_CASE("loan_value_with_liquidation") {
    LoanTerms t = base_terms();
    t.collateral = 150.0;
    t.repayment = 100.0;
    const auto plain = loan_values(t);
    const auto liq = loan_value_with_liquidation(t, LiquidationSpec{});
    CHECK(liq.liquidation_value == doctest::Approx(100.0 * 0.06871372271014692).epsilon(1e-12));
    CHECK(liq.lender_value == doctest::Approx(plain.lender_value + liq.liquidation_value));
    CHECK(liq.borrower_value == doctest::Approx(plain.borrower_value - liq.liquidation_value));
    CHECK_THROWS_AS(loan_value_with_liquidation(t, LiquidationSpec{0.0, 0.08}), DomainError);
}

TEST_CASE("utilization_rate") {
    const UtilizationCurve c{};
    CHECK(utilization_rate(c, 0.0) == 0.0);
    CHECK(utilization_rate(c, 0.5) == doctest::Approx(0.02));
    CHECK(utilization_rate(c, 0.8) == doctest::Approx(0.032));
    CHECK(utilization_rate(c, 0.9) == doctest::Approx(0.032 + 0.075).epsilon(1e-15));
    CHECK(utilization_rate(c, 1.0) == doctest::Approx(0.182));
    const UtilizationCurve d{0.8, 0.02, 0.05, 1.0};
    CHECK(utilization_rate(d, 0.9) == doctest::Approx(0.16).epsilon(1e-14));
    CHECK_THROWS_AS(utilization_rate(c, 1.2), DomainError);
    CHECK_THROWS_AS(utilization_rate(UtilizationCurve{0.8, 0.0, 0.5, 0.2}, 0.5), DomainError);

    double prev = -1;
    for (double u = 0; u <= 1.0; u += 0.01) {
        const double r = utilization_rate(c, u);
        CHECK(r >= prev);
        prev = r;
    }
}

TEST_CASE("recycling leverage") {
    CHECK(recycling_leverage(0.5, 1) == 1.0);
    CHECK(recycling_leverage(0.5, 2) == 1.5);
    CHECK(recycling_leverage(0.5, 3) == 1.75);
    CHECK(recycling_leverage_limit(0.5) == 2.0);
    CHECK(recycling_leverage_limit(0.2) == doctest::Approx(5.0));
    gen::Rng rng(4);
    for (int i = 0; i < 100; ++i) {
        const double x = rng.uniform(0.01, 0.99);
        double prev = 0;
        for (std::size_t n = 1; n < 40; ++n) {
            const double l = recycling_leverage(x, n);
            CHECK(l >= prev);  // saturates in floating point near the limit
            CHECK(l < recycling_leverage_limit(x) * (1 + 1e-12));
            prev = l;
        }
    }
    CHECK_THROWS_AS(recycling_leverage_limit(0.0), DomainError);
}

TEST_CASE("liquidation limits") {
    LoanTerms t = base_terms();
    t.collateral = 150.0;
    t.repayment = 100.0;
    const auto plain = loan_values(t);
    const auto zero = loan_value_with_liquidation(t, LiquidationSpec{1.2, 0.0});
    CHECK(zero.lender_value == plain.lender_value);
    CHECK(zero.borrower_value == plain.borrower_value);
    const auto compound = loan_value_with_liquidation(t, LiquidationSpec{1.2, 0.08});
    CHECK(compound.lender_value > plain.lender_value);
    const auto far = loan_value_with_liquidation(t, LiquidationSpec{1e-8, 0.08});
    CHECK(far.lender_value == doctest::Approx(plain.lender_value).epsilon(1e-12));
}

TEST_CASE("base case against simulation") {
    LoanTerms t = base_terms();
    t.sigma_alpha = 0.2;
    CHECK(margrabe_exchange_value(t) == doctest::Approx(0.07965567455405796).epsilon(1e-13));
    const auto est = exchange_by_simulation(t, 0.0, 5, 200000);
    CHECK(std::abs(est.mean - margrabe_exchange_value(t)) < 3.0 * est.std_error);

    // lender's claim is Min[A, B]; price it directly
    mc::GbmSpec g;
    g.sigma_a = 0.2;
    g.paths = 200000;
    g.seed = 6;
    const auto lender = mc::price_payoff(g, [](double a, double b) { return std::min(a, b); }, 0.0);
    CHECK(std::abs(lender.mean - loan_values(t).lender_value) < 3.0 * lender.std_error);

    // vega at the money
    LoanTerms up = t;
    up.sigma_alpha = 0.21;
    CHECK(margrabe_exchange_value(up) > margrabe_exchange_value(t));
}
