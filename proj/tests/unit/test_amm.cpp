#include <doctest.h>

#include "cryptoyield/amm/analytics.hpp"
#include "cryptoyield/amm/pool.hpp"

#include "generators.hpp"

#include <cmath>

using namespace cyield;
using namespace cyield::amm;
using core::Rational;

TEST_CASE("create_pool") {
    CHECK(FloatPool::create(1000, 1000, 0.003).total_shares() == 1000.0);
    CHECK(FloatPool::create(4, 1, 0).total_shares() == 2.0);
    CHECK(ExactPool::create(4, 1, 0).total_shares() == 2);
    CHECK_THROWS_AS(FloatPool::create(0, 1, 0.003), DomainError);
    CHECK_THROWS_AS(FloatPool::create(1, -1, 0.003), DomainError);
    CHECK_THROWS_AS(FloatPool::create(1, 1, 1.0), DomainError);
}

TEST_CASE("add_liquidity / remove_liquidity") {
    auto pool = FloatPool::create(1000, 1000, 0.003);
    CHECK(pool.add_liquidity(0, 0) == 0.0);
    const double minted = pool.add_liquidity(100, 100);
    CHECK(minted == doctest::Approx(100.0));  // 10% of the 1000 outstanding
    CHECK(pool.reserve_x() == 1100.0);
    CHECK(pool.spot_price() == 1.0);

    const auto [dx, dy] = pool.remove_liquidity(pool.total_shares() * 0.1);
    CHECK(dx == doctest::Approx(110.0));
    CHECK(dy == doctest::Approx(110.0));
    const auto [zx, zy] = pool.remove_liquidity(0);
    CHECK(zx == 0.0);
    CHECK(zy == 0.0);

    CHECK_THROWS_AS(pool.remove_liquidity(pool.total_shares() * 1.5), DomainError);

    auto skewed = FloatPool::create(1000, 2000, 0.003);
    CHECK_THROWS_AS(skewed.add_liquidity(100, 100), DomainError);
    CHECK(skewed.add_liquidity(100, 200) > 0.0);

    SUBCASE("remove everything kills the pool") {
        auto p = FloatPool::create(10, 40, 0.0);
        const auto [x, y] = p.remove_liquidity(p.total_shares());
        CHECK(x == 10.0);
        CHECK(y == 40.0);
        CHECK_FALSE(p.live());
        CHECK_THROWS_AS(p.swap_x_for_y(1.0), StateError);
        CHECK_THROWS_AS(p.add_liquidity(1.0, 4.0), StateError);
    }
}

TEST_CASE("swap_x_for_y worked examples") {
    auto pool = FloatPool::create(1000, 1000, 0.003);
    const auto r = pool.swap_x_for_y(100);
    CHECK(r.amount_out == doctest::Approx(90.6610893880149131).epsilon(1e-14));
    CHECK(r.fee_paid == doctest::Approx(0.3));
    CHECK(pool.reserve_x() == 1100.0);
    CHECK(pool.product() > 1e6);
    CHECK(r.execution_price <= r.spot_price_before);
    CHECK(r.execution_price >= r.spot_price_after);
    CHECK(r.effective_price < r.execution_price);

    auto exact = ExactPool::create(1000, 1000, 0);
    const auto e = exact.swap_x_for_y(100);
    CHECK(e.amount_out == 1000 - Rational(1000000, 1100));
    CHECK(exact.product() == 1000000);

    CHECK_THROWS_AS(pool.swap_x_for_y(0.0), DomainError);
    CHECK_THROWS_AS(pool.swap_y_for_x(-1.0), DomainError);
}

TEST_CASE("tiny trades execute at spot") {
    auto pool = FloatPool::create(1000, 2500, 0.003);
    const auto r = pool.swap_x_for_y(1e-9);
    CHECK(r.execution_price == doctest::Approx(2.5).epsilon(1e-9));
}

TEST_CASE("swap_y_for_x mirrors swap_x_for_y") {
    auto a = FloatPool::create(1000, 1000, 0.003);
    auto b = FloatPool::create(1000, 1000, 0.003);
    CHECK(a.swap_x_for_y(37.5).amount_out == b.swap_y_for_x(37.5).amount_out);

    SUBCASE("fee-free round trip restores the input exactly") {
        auto p = ExactPool::create(1000, 1000, 0);
        const auto out = p.swap_x_for_y(100).amount_out;
        const auto back = p.swap_y_for_x(out).amount_out;
        CHECK(back == 100);
        CHECK(p.reserve_x() == 1000);
        CHECK(p.reserve_y() == 1000);
    }
    SUBCASE("round trip with fee loses value") {
        auto p = ExactPool::create(1000, 1000, Rational(3, 1000));
        const auto out = p.swap_x_for_y(100).amount_out;
        CHECK(p.swap_y_for_x(out).amount_out < 100);
    }
}

TEST_CASE("slippage properties") {
    gen::Rng rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        const double x = rng.log_uniform(10, 1e6), y = rng.log_uniform(10, 1e6);
        const double fee = rng.coin() ? 0.003 : 0.0;
        const auto pool = FloatPool::create(x, y, fee);
        const double small = rng.log_uniform(1e-3, 1.0) * x;
        const double large = small * rng.uniform(1.1, 3.0);
        // worse average price for the larger trade
        CHECK(pool.quote(SwapDirection::XForY, large) / large < pool.quote(SwapDirection::XForY, small) / small);
        // deeper pool, less impact for a fixed order
        const auto deep = FloatPool::create(x * 4, y * 4, fee);
        CHECK(deep.quote(SwapDirection::XForY, small) > pool.quote(SwapDirection::XForY, small));
    }
}

TEST_CASE("arbitrage_to_price") {
    SUBCASE("external at spot: no trade") {
        auto p = FloatPool::create(1000, 1000, 0.003);
        CHECK_FALSE(p.arbitrage_to_price(1.0).has_value());
    }
    SUBCASE("fee-free alignment to 4") {
        auto p = FloatPool::create(1000, 1000, 0.0);
        const auto r = p.arbitrage_to_price(4.0);
        REQUIRE(r.has_value());
        CHECK(r->direction == SwapDirection::YForX);
        CHECK(p.reserve_x() == doctest::Approx(500.0).epsilon(1e-12));
        CHECK(p.reserve_y() == doctest::Approx(2000.0).epsilon(1e-12));
    }
    SUBCASE("inside the fee band: no trade") {
        auto p = FloatPool::create(1000, 1000, 0.003);
        CHECK_FALSE(p.arbitrage_to_price(0.9975).has_value());
        CHECK_FALSE(p.arbitrage_to_price(1.0025).has_value());
        CHECK(p.arbitrage_to_price(0.99).has_value());
    }
    SUBCASE("gas cost suppresses unprofitable trades") {
        auto p = FloatPool::create(1000, 1000, 0.0);
        p.set_gas_cost(1000.0);
        CHECK_FALSE(p.arbitrage_to_price(1.1).has_value());
    }
    SUBCASE("post-trade price properties") {
        gen::Rng rng(99);
        for (int trial = 0; trial < 500; ++trial) {
            const double fee = trial % 2 == 0 ? 0.0 : rng.uniform(0.0005, 0.01);
            auto p = FloatPool::create(rng.log_uniform(100, 1e6), rng.log_uniform(100, 1e6), fee);
            const double target = p.spot_price() * rng.log_uniform(0.2, 5.0);
            const auto r = p.arbitrage_to_price(target);
            const double s = p.spot_price();
            if (fee == 0.0) {
                CHECK(std::abs(s / target - 1.0) < 1e-12);
            } else {
                CHECK(target >= s * (1 - fee) * (1 - 1e-12));
                CHECK(target <= s / (1 - fee) * (1 + 1e-12));
            }
            (void)r;
        }
    }
    CHECK_THROWS_AS(FloatPool::create(1, 1, 0).arbitrage_to_price(0.0), DomainError);
}

TEST_CASE("impermanent_loss_relative") {
    CHECK(impermanent_loss_relative(1.0) == 0.0);
    CHECK(impermanent_loss_relative(2.0) == doctest::Approx(-0.0571909584179366341).epsilon(1e-15));
    CHECK_THROWS_AS(impermanent_loss_relative(0.0), DomainError);
    gen::Rng rng(8);
    for (int i = 0; i < 200; ++i) {
        const double r = rng.log_uniform(1e-3, 1e3);
        CHECK(impermanent_loss_relative(r) == doctest::Approx(impermanent_loss_relative(1.0 / r)).epsilon(1e-13));
        CHECK(impermanent_loss_relative(r) < 0.0);
    }
}

TEST_CASE("absolute_impermanent_pnl") {
    const TokenPrices entry{2.0, 1.0};
    SUBCASE("no activity") {
        auto pool = FloatPool::create(1000, 2000, 0.003);
        const auto pos = open_position(pool, 100, 200, entry);
        CHECK(absolute_impermanent_pnl(pos, pool, entry) == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("fee-free repricing equals IL times hold value") {
        auto pool = FloatPool::create(1000, 2000, 0.0);
        const auto pos = open_position(pool, 100, 200, entry);
        const TokenPrices exit{5.0, 1.0};
        pool.arbitrage_to_price(exit.exchange_rate());
        const double hold = pos.entry_x * exit.x + pos.entry_y * exit.y;
        const double r = exit.exchange_rate() / entry.exchange_rate();
        CHECK(absolute_impermanent_pnl(pos, pool, exit) ==
              doctest::Approx(impermanent_loss_relative(r) * hold).epsilon(1e-10));
    }
    SUBCASE("two-way volume at unchanged price earns fees") {
        auto pool = FloatPool::create(1000, 2000, 0.003);
        const auto pos = open_position(pool, 1000, 2000, entry);
        for (int i = 0; i < 50; ++i) {
            const auto out = pool.swap_x_for_y(50).amount_out;
            pool.swap_y_for_x(out);
            pool.arbitrage_to_price(2.0);
        }
        CHECK(absolute_impermanent_pnl(pos, pool, entry) > 0.0);
    }
    SUBCASE("dead pool") {
        auto pool = FloatPool::create(10, 10, 0.0);
        const auto pos = LpPosition{pool.total_shares(), 10, 10, {1, 1}};
        pool.remove_liquidity(pool.total_shares());
        CHECK_THROWS_AS(absolute_impermanent_pnl(pos, pool, {1, 1}), StateError);
    }
}

TEST_CASE("lp_longrun_yield") {
    CHECK(lp_longrun_yield(0.1, 0.0, 3.0) == doctest::Approx(0.1));
    CHECK(lp_longrun_yield(0.1, 0.8, 10000.0) == doctest::Approx(0.092).epsilon(1e-14));
    double prev = -HUGE_VAL;
    for (double t = 0.5; t < 1e7; t *= 3) {
        const double v = lp_longrun_yield(0.1, 0.8, t);
        CHECK(v > prev);
        prev = v;
    }
    CHECK_THROWS_AS(lp_longrun_yield(0.1, 0.8, 0.0), DomainError);
}
