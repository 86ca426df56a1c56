#pragma once

// Constant-product (x*y = k) pool, templated on the number type so invariant
// tests can run in exact rational arithmetic while production code uses double.

#include "cryptoyield/core/rational.hpp"
#include "cryptoyield/error.hpp"

#include <cmath>
#include <optional>
#include <utility>

namespace cyield::amm {

template <typename T>
struct NumTraits;

template <>
struct NumTraits<double> {
    static double sqrt(double v) { return std::sqrt(v); }
    static double abs(double v) { return std::fabs(v); }
    static double ratio_tolerance() { return 1e-9; }
};

template <>
struct NumTraits<core::Rational> {
    static core::Rational sqrt(const core::Rational& v) { return core::exact_sqrt(v); }
    static core::Rational abs(const core::Rational& v) { return boost::multiprecision::abs(v); }
    // Exact mode: deposits must match the pool ratio exactly.
    static core::Rational ratio_tolerance() { return 0; }
};

// Uniswap V3 fee tiers.
inline constexpr double kFeeLow = 0.0005;
inline constexpr double kFeeMedium = 0.003;
inline constexpr double kFeeHigh = 0.01;

enum class SwapDirection { XForY, YForX };

// All prices are quoted as token-y per token-x.
template <typename T>
struct SwapReceipt {
    SwapDirection direction = SwapDirection::XForY;
    T amount_in{};
    T amount_out{};
    T fee_paid{};         // in the input token
    T execution_price{};  // fee-exclusive average price
    T effective_price{};  // all-in average price, fee included
    T spot_price_before{};
    T spot_price_after{};
};

template <typename T>
class Pool {
public:
    using Traits = NumTraits<T>;

    // Initial share supply is sqrt(x0 * y0).
    static Pool create(const T& x0, const T& y0, const T& fee) {
        if (!(x0 > 0) || !(y0 > 0)) throw DomainError("initial reserves must be positive");
        if (!(fee >= 0) || !(fee < 1)) throw DomainError("fee must lie in [0, 1)");
        Pool p;
        p.reserve_x_ = x0;
        p.reserve_y_ = y0;
        p.fee_ = fee;
        p.total_shares_ = Traits::sqrt(T(x0 * y0));
        return p;
    }

    const T& reserve_x() const { return reserve_x_; }
    const T& reserve_y() const { return reserve_y_; }
    const T& fee() const { return fee_; }
    const T& total_shares() const { return total_shares_; }
    const T& cumulative_fees_x() const { return cumulative_fees_x_; }
    const T& cumulative_fees_y() const { return cumulative_fees_y_; }
    T product() const { return reserve_x_ * reserve_y_; }
    T spot_price() const { return reserve_y_ / reserve_x_; }
    bool live() const { return total_shares_ > 0; }

    // Fixed per-transaction cost in token-y units; an arbitrage trade is only
    // executed when its profit exceeds it.
    const T& gas_cost() const { return gas_cost_; }
    void set_gas_cost(const T& c) {
        if (!(c >= 0)) throw DomainError("gas cost must be non-negative");
        gas_cost_ = c;
    }

    // Pro-rata deposit; returns minted shares. Off-ratio deposits are rejected.
    T add_liquidity(const T& dx, const T& dy) {
        require_live();
        if (!(dx >= 0) || !(dy >= 0)) throw DomainError("liquidity amounts must be non-negative");
        if (dx == 0 && dy == 0) return T(0);
        const T lhs = dx * reserve_y_;
        const T rhs = dy * reserve_x_;
        const T scale = lhs > rhs ? lhs : rhs;
        if (Traits::abs(T(lhs - rhs)) > Traits::ratio_tolerance() * scale)
            throw DomainError("deposit does not match the pool ratio");
        const T minted = total_shares_ * dx / reserve_x_;
        reserve_x_ += dx;
        reserve_y_ += dy;
        total_shares_ += minted;
        return minted;
    }

    // Pro-rata withdrawal of both reserves (accrued fees included).
    std::pair<T, T> remove_liquidity(const T& shares) {
        require_live();
        if (!(shares >= 0)) throw DomainError("shares must be non-negative");
        if (shares > total_shares_) throw DomainError("shares exceed pool supply");
        if (shares == 0) return {T(0), T(0)};
        if (shares == total_shares_) {
            std::pair<T, T> out{reserve_x_, reserve_y_};
            reserve_x_ = reserve_y_ = total_shares_ = T(0);
            return out;
        }
        const T dx = reserve_x_ * shares / total_shares_;
        const T dy = reserve_y_ * shares / total_shares_;
        reserve_x_ -= dx;
        reserve_y_ -= dy;
        total_shares_ -= shares;
        return {dx, dy};
    }

    // Current value of `shares` as token amounts, without withdrawing.
    std::pair<T, T> claim(const T& shares) const {
        require_live();
        if (!(shares >= 0) || shares > total_shares_) throw StateError("share claim exceeds pool supply");
        return {reserve_x_ * shares / total_shares_, reserve_y_ * shares / total_shares_};
    }

    SwapReceipt<T> swap_x_for_y(const T& dx) { return swap(SwapDirection::XForY, dx); }
    SwapReceipt<T> swap_y_for_x(const T& dy) { return swap(SwapDirection::YForX, dy); }

    // Output for a hypothetical input without mutating the pool.
    T quote(SwapDirection dir, const T& amount_in) const {
        const T g = T(1) - fee_;
        const T eff = amount_in * g;
        return dir == SwapDirection::XForY ? reserve_y_ * eff / (reserve_x_ + eff)
                                           : reserve_x_ * eff / (reserve_y_ + eff);
    }

    // Profit-maximising arbitrage against an external price (token-y per
    // token-x). No trade while the price lies in the fee band
    // [spot * (1 - fee), spot / (1 - fee)] or when profit does not cover gas.
    std::optional<SwapReceipt<T>> arbitrage_to_price(const T& external_price) {
        require_live();
        if (!(external_price > 0)) throw DomainError("external price must be positive");
        const T g = T(1) - fee_;
        const T k = product();
        const T s = spot_price();
        if (external_price < s * g) {
            // Pool overprices x: sell x until g * k / (x + g dx)^2 = P.
            const T dx = (Traits::sqrt(T(g * k / external_price)) - reserve_x_) / g;
            if (!(dx > 0)) return std::nullopt;
            const T out = quote(SwapDirection::XForY, dx);
            if (!(out - external_price * dx > gas_cost_)) return std::nullopt;
            return swap_x_for_y(dx);
        }
        if (external_price * g > s) {
            // Pool underprices x: sell y until g * k / (y + g dy)^2 = 1 / P.
            const T dy = (Traits::sqrt(T(g * k * external_price)) - reserve_y_) / g;
            if (!(dy > 0)) return std::nullopt;
            const T out = quote(SwapDirection::YForX, dy);
            if (!(external_price * out - dy > gas_cost_)) return std::nullopt;
            return swap_y_for_x(dy);
        }
        return std::nullopt;
    }

private:
    void require_live() const {
        if (!live()) throw StateError("pool has no liquidity");
    }

    SwapReceipt<T> swap(SwapDirection dir, const T& amount_in) {
        require_live();
        if (!(amount_in > 0)) throw DomainError("swap input must be positive");
        SwapReceipt<T> r;
        r.direction = dir;
        r.amount_in = amount_in;
        r.spot_price_before = spot_price();
        r.fee_paid = amount_in * fee_;
        r.amount_out = quote(dir, amount_in);
        const T eff = amount_in - r.fee_paid;
        if (dir == SwapDirection::XForY) {
            reserve_x_ += amount_in;
            reserve_y_ -= r.amount_out;
            cumulative_fees_x_ += r.fee_paid;
            r.execution_price = r.amount_out / eff;
            r.effective_price = r.amount_out / amount_in;
        } else {
            reserve_y_ += amount_in;
            reserve_x_ -= r.amount_out;
            cumulative_fees_y_ += r.fee_paid;
            r.execution_price = eff / r.amount_out;
            r.effective_price = amount_in / r.amount_out;
        }
        r.spot_price_after = spot_price();
        return r;
    }

    T reserve_x_{};
    T reserve_y_{};
    T fee_{};
    T total_shares_{};
    T cumulative_fees_x_{};
    T cumulative_fees_y_{};
    T gas_cost_{};
};

using FloatPool = Pool<double>;
using ExactPool = Pool<core::Rational>;

} // namespace cyield::amm
