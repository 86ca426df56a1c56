#include "cryptoyield/amm/analytics.hpp"

#include <cmath>
#include <fmt/format.h>

namespace cyield::amm {

LpPosition open_position(FloatPool& pool, double dx, double dy, TokenPrices entry_prices) {
    const double shares = pool.add_liquidity(dx, dy);
    return LpPosition{shares, dx, dy, entry_prices};
}

double impermanent_loss_relative(double price_ratio) {
    if (!(price_ratio > 0.0) || !std::isfinite(price_ratio))
        throw DomainError(fmt::format("price ratio must be positive, got {}", price_ratio));
    return 2.0 * std::sqrt(price_ratio) / (1.0 + price_ratio) - 1.0;
}

double absolute_impermanent_pnl(const LpPosition& position, const FloatPool& pool, TokenPrices exit_prices) {
    if (!pool.live()) throw StateError("pool is dead; position cannot be valued");
    if (!(position.shares >= 0.0) || position.shares > pool.total_shares())
        throw StateError("position shares exceed pool supply");
    if (!(exit_prices.x > 0.0) || !(exit_prices.y > 0.0)) throw DomainError("exit prices must be positive");
    const auto [cx, cy] = pool.claim(position.shares);
    const double lp_value = cx * exit_prices.x + cy * exit_prices.y;
    const double hold_value = position.entry_x * exit_prices.x + position.entry_y * exit_prices.y;
    return lp_value - hold_value;
}

double lp_longrun_yield(double alpha, double sigma, double horizon) {
    if (!(alpha >= 0.0)) throw DomainError("fee rate alpha must be non-negative");
    if (!(sigma >= 0.0)) throw DomainError("sigma must be non-negative");
    if (!(horizon > 0.0)) throw DomainError("horizon must be positive");
    return (alpha * horizon - sigma * std::sqrt(horizon)) / horizon;
}

} // namespace cyield::amm
