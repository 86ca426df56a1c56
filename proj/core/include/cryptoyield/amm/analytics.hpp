#pragma once

#include "cryptoyield/amm/pool.hpp"

namespace cyield::amm {

// Numeraire prices of the two pool tokens.
struct TokenPrices {
    double x = 1.0;
    double y = 1.0;

    double exchange_rate() const { return x / y; }  // token-y per token-x
};

struct LpPosition {
    double shares = 0.0;
    double entry_x = 0.0;  // token amounts deposited
    double entry_y = 0.0;
    TokenPrices entry_prices;
};

// Deposits (dx, dy) into `pool` and returns the resulting position.
LpPosition open_position(FloatPool& pool, double dx, double dy, TokenPrices entry_prices);

// Value of the LP position relative to holding, fees excluded:
// 2 sqrt(r) / (1 + r) - 1 for r = exit rate / entry rate.
double impermanent_loss_relative(double price_ratio);

// Value of the pro-rata pool claim minus value of the entry tokens held
// passively, both at `exit_prices`. Fees sit in the reserves, so the result is
// net of fee income. StateError when the pool is dead or the position is stale.
double absolute_impermanent_pnl(const LpPosition& position, const FloatPool& pool, TokenPrices exit_prices);

// (alpha T - sigma sqrt(T)) / T: average fee gain per unit time net of the
// sqrt(T)-scaled impermanent risk. Tends to alpha as T grows.
double lp_longrun_yield(double alpha, double sigma, double horizon);

} // namespace cyield::amm
