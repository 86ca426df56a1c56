#include "commands.hpp"

#include "cryptoyield/amm/analytics.hpp"
#include "cryptoyield/amm/pool.hpp"
#include "cryptoyield/core/csv.hpp"
#include "cryptoyield/core/portfolio.hpp"
#include "cryptoyield/core/stats.hpp"
#include "cryptoyield/error.hpp"
#include "cryptoyield/lending.hpp"
#include "cryptoyield/mc/oracle.hpp"
#include "cryptoyield/mc/philox.hpp"
#include "cryptoyield/optrates.hpp"
#include "cryptoyield/perps.hpp"
#include "cryptoyield/staking.hpp"
#include "cryptoyield/xccy.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <map>
#include <set>

namespace cyield::app {

namespace {

using core::Day;
using core::Timestamp;

constexpr double kSecondsPerYear = 365.0 * 86400.0;

double pct(double fraction) { return 100.0 * fraction; }

std::string level_name(double level) { return fmt::format("p{}_pct", num(level)); }

json percentiles_json(std::span<const double> values, std::span<const double> levels) {
    json out = json::object();
    for (double l : levels) out[fmt::format("p{}", num(l))] = core::percentile(values, l);
    return out;
}

// ---------------------------------------------------------------- stake

Report run_stake(const Params& p) {
    const auto validators = staking::read_validators_csv(p.path("validators"));
    const auto levels = p.numbers("levels");

    std::vector<Day> days;
    if (p.has("day")) {
        days.push_back(core::parse_day(p.text("day")));
    } else {
        std::set<Day> all;
        for (const auto& v : validators)
            for (const auto& b : v.balances) all.insert(core::day_of(b.time));
        // the first day only opens a period
        if (!all.empty()) all.erase(all.begin());
        days.assign(all.begin(), all.end());
    }

    Report r;
    Series bands{"bands", {"day", "eligible"}, {}};
    for (double l : levels) bands.header.push_back(level_name(l));
    std::size_t skipped = 0;
    std::optional<staking::CohortBands> last;
    for (Day d : days) {
        try {
            auto b = staking::percentile_bands(validators, d, levels);
            std::vector<std::string> row{core::format_day(d), std::to_string(b.eligible)};
            for (double v : b.returns) row.push_back(num(pct(v)));
            bands.add(std::move(row));
            last = std::move(b);
        } catch (const DataError&) {
            if (days.size() == 1) throw;
            ++skipped;
        }
    }
    if (!last) throw DataError("no day in the data has an eligible validator");

    r.summary["validators"] = validators.size();
    r.summary["days"] = bands.rows.size();
    r.summary["days_without_eligible_validators"] = skipped;
    json latest = {{"day", core::format_day(last->date)}, {"eligible", last->eligible}};
    for (std::size_t i = 0; i < levels.size(); ++i) latest[level_name(levels[i])] = pct(last->returns[i]);
    r.summary["latest"] = latest;
    r.series.push_back(std::move(bands));
    return r;
}

// ---------------------------------------------------------------- amm

Report run_amm(const Params& p) {
    const auto prices = core::PriceSeries::read_csv(p.path("prices"));
    if (prices.size() < 1) throw DataError("price file has no rows");
    auto pool = amm::FloatPool::create(p.number("reserve_x"), p.number("reserve_y"), p.number("fee"));
    pool.set_gas_cost(p.number("gas_cost"));
    const double noise = p.number("noise_volume");
    if (noise < 0.0) throw DomainError("noise_volume must be non-negative");

    const auto& obs = prices.observations();
    const double p0 = obs.front().price;
    // the pool starts at the first external price; y is the numeraire
    pool.arbitrage_to_price(p0);
    const amm::LpPosition position{pool.total_shares(), pool.reserve_x(), pool.reserve_y(), {p0, 1.0}};

    mc::PhiloxStream rng(p.seed(), 0);
    std::size_t arb_trades = 0;

    Report r;
    Series s{"pool",
             {"timestamp", "external_price", "pool_price", "reserve_x", "reserve_y", "lp_value", "hold_value",
              "impermanent_pnl", "il_formula_pct", "il_realized_pct"},
             {}};
    for (const auto& o : obs) {
        if (noise > 0.0 && &o != &obs.front()) {
            const auto out = pool.swap_x_for_y(noise * pool.reserve_x() * rng.next_uniform());
            pool.swap_y_for_x(out.amount_out);
        }
        if (pool.arbitrage_to_price(o.price)) ++arb_trades;
        const amm::TokenPrices now{o.price, 1.0};
        const double hold = position.entry_x * now.x + position.entry_y * now.y;
        const double pnl = amm::absolute_impermanent_pnl(position, pool, now);
        s.add({core::format_timestamp(o.time), num(o.price), num(pool.spot_price()), num(pool.reserve_x()),
               num(pool.reserve_y()), num(hold + pnl), num(hold), num(pnl),
               num(pct(amm::impermanent_loss_relative(o.price / p0))), num(pct(pnl / hold))});
    }

    r.summary["observations"] = obs.size();
    r.summary["arbitrage_trades"] = arb_trades;
    r.summary["fees_x"] = pool.cumulative_fees_x();
    r.summary["fees_y"] = pool.cumulative_fees_y();
    r.summary["final_price_ratio"] = obs.back().price / p0;
    r.summary["final_il_formula_pct"] = pct(amm::impermanent_loss_relative(obs.back().price / p0));
    r.summary["final_il_realized_pct"] = core::parse_double(s.rows.back().back());
    if (obs.size() >= 3) {
        try {
            const double vol = core::realized_vol(prices);
            r.summary["realized_vol_pct"] = pct(vol);
            if (const auto alpha = p.maybe_number("fee_yield"))
                r.summary["longrun_yield_pct"] = pct(amm::lp_longrun_yield(*alpha, vol, p.number("horizon_years")));
        } catch (const DataError& e) {
            r.summary["realized_vol_pct"] = nullptr;
            r.summary["realized_vol_note"] = e.what();
        }
    }
    r.series.push_back(std::move(s));
    return r;
}

// ---------------------------------------------------------------- loan

lending::LoanTerms loan_terms(const Params& p) {
    lending::LoanTerms t;
    t.collateral = p.number("collateral");
    t.repayment = p.number("repayment");
    t.sigma_alpha = p.number("sigma_alpha");
    t.sigma_beta = p.number("sigma_beta");
    t.rho = p.number("rho");
    t.r_alpha = p.number("r_alpha");
    t.r_beta = p.number("r_beta");
    t.maturity = p.number("maturity");
    t.validate();
    return t;
}

Report run_loan(const Params& p) {
    const auto terms = loan_terms(p);
    const lending::LiquidationSpec liq{p.number("barrier"), p.number("penalty")};
    const auto b = lending::margrabe_exchange(terms);
    const auto v = lending::loan_value_with_liquidation(terms, liq);

    Report r;
    r.summary["combined_sigma"] = b.sigma;
    r.summary["d1"] = b.d1;
    r.summary["d2"] = b.d2;
    r.summary["degenerate"] = b.degenerate;
    r.summary["discount_alpha"] = b.discount_alpha;
    r.summary["discount_beta"] = b.discount_beta;
    r.summary["exchange_option_value"] = v.exchange_option_value;
    r.summary["borrower_value"] = v.borrower_value;
    r.summary["lender_value"] = v.lender_value;
    r.summary["liquidation_value"] = v.liquidation_value;
    r.summary["discounted_collateral"] = b.discount_alpha * terms.collateral;
    r.summary["discounted_repayment"] = b.discount_beta * terms.repayment;
    r.summary["collateralization"] = terms.collateral / terms.repayment;
    if (const auto u = p.maybe_number("utilization")) {
        const lending::UtilizationCurve curve{p.number("kink"), p.number("base_rate"), p.number("slope_low"),
                                              p.number("slope_high")};
        r.summary["borrow_rate_pct"] = pct(lending::utilization_rate(curve, *u));
    }

    // value against the collateralization ratio, repayment held fixed
    const auto points = p.integer("sweep_points");
    if (points < 2) throw DomainError("sweep_points must be at least 2");
    Series s{"sweep", {"collateralization", "exchange_option", "borrower", "lender", "liquidation"}, {}};
    for (std::int64_t i = 0; i < points; ++i) {
        auto t = terms;
        t.collateral = terms.repayment * (0.5 + 2.5 * static_cast<double>(i) / static_cast<double>(points - 1));
        const auto sv = lending::loan_value_with_liquidation(t, liq);
        s.add({num(t.collateral / t.repayment), num(sv.exchange_option_value), num(sv.borrower_value),
               num(sv.lender_value), num(sv.liquidation_value)});
    }
    r.series.push_back(std::move(s));
    return r;
}

// ---------------------------------------------------------------- perp

Report run_perp_funding(const Params& p) {
    perps::FundingSpec spec;
    spec.variant =
        p.text("variant") == "bitmex" ? perps::FundingVariant::BitMexClamp : perps::FundingVariant::DeribitDeadband;
    spec.band = p.number("band");
    spec.interest_rate = p.number("interest_rate");
    spec.interval_hours = p.number("interval_hours");
    spec.validate();
    const auto obs = perps::read_mark_index_csv(p.path("input"));
    if (obs.empty()) throw DataError("funding input has no rows");
    const auto events = perps::funding_events(spec, obs);
    const double notional = p.number("notional");

    Report r;
    Series s{"funding",
             {"timestamp", "mark", "index", "premium_pct", "funding_rate", "funding_pct", "time_fraction",
              "payment_long"},
             {}};
    std::vector<double> rates_pct;
    std::size_t longs_pay = 0;
    for (std::size_t i = 0; i < obs.size(); ++i) {
        const auto& e = events[i];
        rates_pct.push_back(pct(e.funding_rate));
        if (e.funding_rate > 0) ++longs_pay;
        s.add({core::format_timestamp(obs[i].time), num(obs[i].pair.mark_price), num(obs[i].pair.index_price),
               num(pct(perps::premium_rate(obs[i].pair))), num(e.funding_rate), num(pct(e.funding_rate)),
               num(e.time_fraction), num(notional * e.cash_flow())});
    }
    const double mean_pct = core::sample_mean(rates_pct);
    const std::vector<double> levels{5, 25, 50, 75, 95};
    r.summary["variant"] = p.text("variant");
    r.summary["events"] = events.size();
    r.summary["mean_funding_pct"] = mean_pct;
    r.summary["annualized_mean_funding_pct"] = mean_pct * 365.0 * 24.0 / spec.interval_hours;
    r.summary["funding_pct_percentiles"] = percentiles_json(rates_pct, levels);
    r.summary["fraction_longs_pay"] = static_cast<double>(longs_pay) / static_cast<double>(events.size());
    r.summary["total_paid_by_long"] = perps::funding_accrual(notional, events);
    r.series.push_back(std::move(s));
    return r;
}

Report run_perp_basis(const Params& p) {
    const auto obs = perps::read_basis_csv(p.path("input"));
    if (obs.empty()) throw DataError("basis input has no rows");
    const auto window = p.integer("window_days");
    if (window < 1) throw DomainError("window_days must be at least 1");

    std::map<Day, std::pair<double, int>> per_day;
    std::vector<double> basis(obs.size()), rates;
    for (std::size_t i = 0; i < obs.size(); ++i) {
        basis[i] = perps::futures_basis(obs[i].future, obs[i].perp);
        auto& d = per_day[core::day_of(obs[i].time)];
        d.first += basis[i];
        d.second += 1;
    }
    std::vector<optrates::DailyValue> daily;
    for (const auto& [day, acc] : per_day) daily.push_back({day, acc.first / acc.second});
    const auto rolling = optrates::rolling_average(daily, static_cast<int>(window));
    std::map<Day, double> rolling_by_day;
    for (const auto& d : rolling) rolling_by_day[d.day] = d.value;

    Report r;
    Series s{"basis",
             {"timestamp", "perp", "future", "expiry", "basis_pct", "tenor_years", "implied_rate_pct",
              fmt::format("rolling_{}d_basis_pct", window)},
             {}};
    std::size_t positive = 0;
    for (std::size_t i = 0; i < obs.size(); ++i) {
        const double tenor = static_cast<double>(obs[i].expiry - obs[i].time) / kSecondsPerYear;
        const double rate = perps::implied_rate_from_basis(basis[i], tenor);
        rates.push_back(pct(rate));
        if (rate > 0) ++positive;
        s.add({core::format_timestamp(obs[i].time), num(obs[i].perp), num(obs[i].future),
               core::format_timestamp(obs[i].expiry), num(pct(basis[i])), num(tenor), num(pct(rate)),
               num(pct(rolling_by_day.at(core::day_of(obs[i].time))))});
    }
    r.summary["observations"] = obs.size();
    r.summary["mean_implied_rate_pct"] = core::sample_mean(rates);
    r.summary["fraction_positive"] = static_cast<double>(positive) / static_cast<double>(obs.size());
    r.series.push_back(std::move(s));
    return r;
}

// ---------------------------------------------------------------- implied-rate

Report run_implied_rate(const Params& p) {
    const auto quotes = optrates::read_option_chain_csv(p.path("input"));
    const auto points = optrates::implied_points(quotes);
    const auto days = optrates::aggregate_all_days(points);
    if (days.empty()) throw DataError("no valid implied-rate point in the option chain");
    std::vector<int> windows;
    for (double w : p.numbers("windows")) {
        if (w < 1 || w != std::floor(w)) throw DomainError("windows must be positive whole numbers of days");
        windows.push_back(static_cast<int>(w));
    }

    std::vector<optrates::DailyValue> daily;
    for (const auto& d : days) daily.push_back({d.day, d.mean_rate});
    std::vector<std::vector<optrates::DailyValue>> smoothed;
    for (int w : windows) smoothed.push_back(optrates::rolling_average(daily, w));

    Report r;
    Series ds{"daily", {"day", "mean_rate_pct", "valid_points", "invalid_points"}, {}};
    for (int w : windows) ds.header.push_back(fmt::format("rolling_{}d_pct", w));
    for (std::size_t i = 0; i < days.size(); ++i) {
        std::vector<std::string> row{core::format_day(days[i].day), num(pct(days[i].mean_rate)),
                                     std::to_string(days[i].valid_points), std::to_string(days[i].invalid_points)};
        for (const auto& sm : smoothed) row.push_back(num(pct(sm[i].value)));
        ds.add(std::move(row));
    }
    Series ps{"points", {"quote_time", "expiry", "strike", "discount_factor", "rate_pct", "valid"}, {}};
    std::size_t invalid = 0;
    for (const auto& pt : points) {
        if (!pt.valid) ++invalid;
        ps.add({core::format_timestamp(pt.quote_time), core::format_timestamp(pt.expiry), num(pt.strike),
                num(pt.discount_factor), pt.valid ? num(pct(pt.rate)) : "", pt.valid ? "1" : "0"});
    }
    std::vector<double> means;
    for (const auto& d : days) means.push_back(pct(d.mean_rate));
    r.summary["quotes"] = quotes.size();
    r.summary["invalid_points"] = invalid;
    r.summary["days"] = days.size();
    r.summary["mean_daily_rate_pct"] = core::sample_mean(means);
    r.summary["latest_daily_rate_pct"] = means.back();
    r.series.push_back(std::move(ds));
    r.series.push_back(std::move(ps));
    return r;
}

// ---------------------------------------------------------------- xccy

core::Rational rational_of(const json& v, const std::string& what) {
    if (v.is_string()) return core::parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return core::Rational(v.get<std::int64_t>());
    if (v.is_number()) return core::parse_rational(v.dump());
    throw DataError(fmt::format("{} must be a number or a decimal string", what));
}

core::Rational rational_or(const json& obj, const char* key, core::Rational fallback) {
    return obj.contains(key) ? rational_of(obj.at(key), key) : fallback;
}

xccy::LegSpec leg_of(const json& j) {
    xccy::LegSpec leg;
    if (j.is_null()) return leg;
    const auto kind = j.value("kind", std::string("fixed"));
    if (kind != "fixed" && kind != "floating") throw DataError("leg kind must be 'fixed' or 'floating'");
    leg.kind = kind == "fixed" ? xccy::RateKind::Fixed : xccy::RateKind::Floating;
    leg.fixed_rate = rational_or(j, "rate", 0);
    leg.spread = rational_or(j, "spread", 0);
    return leg;
}

xccy::Party party_of(const json& e) {
    const auto s = e.at("party").get<std::string>();
    if (s == "A") return xccy::Party::A;
    if (s == "B") return xccy::Party::B;
    throw DataError(fmt::format("party must be 'A' or 'B', got '{}'", s));
}

std::string exact(const core::Rational& q) { return q.str(); }
std::string decimal(const core::Rational& q) { return num(core::to_double(q)); }

json settlement_json(const xccy::Settlement& s) {
    json j = json::object();
    if (s.breaching_party) j["breaching_party"] = xccy::to_string(*s.breaching_party);
    if (s.terminating_party) j["terminating_party"] = xccy::to_string(*s.terminating_party);
    j["exposure_paid"] = exact(s.exposure_paid);
    j["uncollateralized_loss"] = exact(s.uncollateralized_loss);
    j["fee_paid"] = exact(s.fee_paid);
    j["fee_shortfall"] = exact(s.fee_shortfall);
    return j;
}

Report run_xccy(const Params& p) {
    const auto file = p.path("scenario");
    const json sc = load_json(file);
    try {
        const json& tj = sc.at("terms");
        xccy::SwapTerms terms;
        terms.notional_a = rational_of(tj.at("notional_a"), "notional_a");
        terms.initial_rate = rational_of(tj.at("initial_rate"), "initial_rate");
        if (tj.contains("final_rate")) terms.final_rate = rational_of(tj.at("final_rate"), "final_rate");
        terms.margin_a = rational_of(tj.at("margin_a"), "margin_a");
        terms.margin_b = rational_of(tj.at("margin_b"), "margin_b");
        terms.required_margin_fraction = rational_or(tj, "required_margin_fraction", terms.required_margin_fraction);
        terms.threshold = rational_or(tj, "threshold", terms.threshold);
        terms.termination_fee = rational_or(tj, "termination_fee", 0);
        terms.leg_a = leg_of(tj.value("leg_a", json()));
        terms.leg_b = leg_of(tj.value("leg_b", json()));
        terms.days_per_year = rational_or(tj, "days_per_year", 365);
        if (tj.contains("maturity")) terms.maturity = core::parse_timestamp(tj.at("maturity").get<std::string>());

        xccy::LedgerState ledger;
        const json& hj = sc.at("holdings");
        ledger.party_a = {rational_or(hj.at("A"), "alpha", 0), rational_or(hj.at("A"), "beta", 0)};
        ledger.party_b = {rational_or(hj.at("B"), "alpha", 0), rational_or(hj.at("B"), "beta", 0)};

        xccy::SwapAgreement swap(terms, ledger);
        const auto alpha0 = swap.ledger().total(xccy::Token::Alpha);
        const auto beta0 = swap.ledger().total(xccy::Token::Beta);

        Report r;
        Series marks{"marks", {"time", "rate", "gain_a", "residual_a", "residual_b", "fraction_a", "fraction_b", "state"},
                     {}};
        json settlements = json::array();
        const auto record_mark = [&](Timestamp t) {
            const auto& e = swap.last_exposure();
            if (!e) return;
            marks.add({core::format_timestamp(t), decimal(e->rate), decimal(e->gain_a), decimal(e->residual_a),
                       decimal(e->residual_b), decimal(e->fraction_a), decimal(e->fraction_b),
                       xccy::to_string(swap.state())});
        };

        const json& events = sc.at("events");
        for (std::size_t i = 0; i < events.size(); ++i) {
            const json& e = events[i];
            const auto type = e.at("type").get<std::string>();
            const Timestamp t = e.contains("time") ? core::parse_timestamp(e.at("time").is_string()
                                                                               ? e.at("time").get<std::string>()
                                                                               : e.at("time").dump())
                                                   : 0;
            try {
                if (type == "initiate") {
                    swap.initiate(t);
                } else if (type == "tick") {
                    const auto s = swap.check_and_terminate({t, rational_of(e.at("rate"), "rate")});
                    record_mark(t);
                    if (s) settlements.push_back(settlement_json(*s));
                } else if (type == "replenish") {
                    swap.replenish(party_of(e), rational_of(e.at("amount"), "amount"), t);
                    record_mark(t);
                } else if (type == "accrue") {
                    xccy::LegPeriod period{t, rational_of(e.at("days"), "days"), {}, {}};
                    if (e.contains("floating_a")) period.floating_a = rational_of(e.at("floating_a"), "floating_a");
                    if (e.contains("floating_b")) period.floating_b = rational_of(e.at("floating_b"), "floating_b");
                    swap.accrue_legs(period);
                } else if (type == "terminate") {
                    settlements.push_back(
                        settlement_json(swap.voluntary_terminate(party_of(e), {t, rational_of(e.at("rate"), "rate")})));
                } else if (type == "mature") {
                    swap.mature(t);
                } else {
                    throw DataError(fmt::format("unknown event type '{}'", type));
                }
            } catch (const Error& err) {
                // keep the error kind; add where it happened
                const auto msg = fmt::format("{}: event #{} ({}): {}", file, i + 1, type, err.what());
                if (err.kind() == Error::Kind::State) throw StateError(msg);
                if (err.kind() == Error::Kind::Numeric) throw NumericError(msg);
                throw DataError(msg);
            }
        }

        Series ledger_series{"ledger", {"seq", "time", "event", "from", "to", "token", "amount", "amount_decimal"}, {}};
        for (const auto& a : swap.audit())
            ledger_series.add({std::to_string(a.seq), core::format_timestamp(a.time), a.event, xccy::to_string(a.from),
                               xccy::to_string(a.to), xccy::to_string(a.token), exact(a.amount), decimal(a.amount)});

        const auto holdings = [](const xccy::Holdings& h) {
            return json{{"alpha", exact(h.alpha)},
                        {"beta", exact(h.beta)},
                        {"alpha_decimal", core::to_double(h.alpha)},
                        {"beta_decimal", core::to_double(h.beta)}};
        };
        r.summary["state"] = xccy::to_string(swap.state());
        if (swap.terminated_by()) r.summary["terminated_by"] = xccy::to_string(*swap.terminated_by());
        r.summary["settlements"] = settlements;
        r.summary["final_holdings"] = {{"A", holdings(swap.ledger().party_a)},
                                       {"B", holdings(swap.ledger().party_b)},
                                       {"contract", holdings(swap.ledger().contract)}};
        r.summary["tokens_conserved"] = swap.ledger().total(xccy::Token::Alpha) == alpha0 &&
                                        swap.ledger().total(xccy::Token::Beta) == beta0;
        r.summary["transfers"] = swap.audit().size();
        r.series.push_back(std::move(ledger_series));
        r.series.push_back(std::move(marks));
        return r;
    } catch (const json::exception& e) {
        throw DataError(fmt::format("{}: malformed scenario: {}", file, e.what()));
    }
}

// ---------------------------------------------------------------- oracle

Report run_oracle(const Params& p) {
    const auto paths = p.integer("paths");
    if (paths < 2) throw DomainError("paths must be at least 2");
    const bool antithetic = p.flag("antithetic");
    Report r;
    r.summary["kind"] = p.text("kind");
    r.summary["seed"] = p.seed();

    if (p.text("kind") == "exchange") {
        lending::LoanTerms t;
        t.collateral = p.number("s0_a");
        t.repayment = p.number("s0_b");
        t.sigma_alpha = p.number("sigma_a");
        t.sigma_beta = p.number("sigma_b");
        t.rho = p.number("rho");
        t.r_alpha = p.number("r_alpha");
        t.r_beta = p.number("r_beta");
        t.maturity = p.number("maturity");
        const double rate = p.number("r");
        const double closed = lending::margrabe_exchange_value(t);
        const auto price = [&](std::size_t n) {
            mc::GbmSpec g;
            g.s0_a = t.collateral;
            g.s0_b = t.repayment;
            g.sigma_a = t.sigma_alpha;
            g.sigma_b = t.sigma_beta;
            g.rho = t.rho;
            g.drift_a = rate - t.r_alpha;
            g.drift_b = rate - t.r_beta;
            g.maturity = t.maturity;
            g.paths = n;
            g.seed = p.seed();
            g.antithetic = antithetic;
            return mc::price_payoff(g, [](double a, double b) { return std::max(a - b, 0.0); }, rate);
        };
        Series s{"convergence", {"paths", "mean", "std_error", "closed_form"}, {}};
        mc::McEstimate est;
        for (auto n : {paths / 16, paths / 4, paths}) {
            if (n < 2) continue;
            est = price(static_cast<std::size_t>(n));
            s.add({std::to_string(est.paths), num(est.mean), num(est.std_error), num(closed)});
        }
        r.summary["estimate"] = est.mean;
        r.summary["std_error"] = est.std_error;
        r.summary["paths"] = est.paths;
        r.summary["closed_form"] = closed;
        r.summary["z_score"] = est.std_error > 0 ? (est.mean - closed) / est.std_error : 0.0;
        r.series.push_back(std::move(s));
        return r;
    }

    lending::OneTouchSpec ot{p.number("spot_ratio"), p.number("barrier"), p.number("payout"), p.number("sigma"),
                             p.number("rate"),       p.number("drift"),   p.number("maturity")};
    const double closed = lending::one_touch_value(ot);
    const auto steps = p.integer("steps");
    if (steps < 1) throw DomainError("steps must be at least 1");
    const auto run = [&](std::int64_t n, bool bridge) {
        mc::RatioProcessSpec s;
        s.s0 = ot.spot_ratio;
        s.sigma = ot.sigma;
        s.drift = ot.drift;
        s.maturity = ot.maturity;
        s.steps = static_cast<std::size_t>(n);
        s.paths = static_cast<std::size_t>(paths);
        s.seed = p.seed();
        s.antithetic = antithetic;
        s.bridge_correction = bridge;
        return mc::first_passage_value(s, ot.barrier, ot.payout, ot.rate);
    };
    Series s{"convergence", {"steps", "bridged_mean", "bridged_std_error", "grid_mean", "grid_std_error", "closed_form"},
             {}};
    for (auto n : {steps / 16, steps / 4}) {
        if (n < 1) continue;
        const auto b = run(n, true), g = run(n, false);
        s.add({std::to_string(n), num(b.mean), num(b.std_error), num(g.mean), num(g.std_error), num(closed)});
    }
    const auto est = run(steps, p.flag("bridge"));
    const auto other = run(steps, !p.flag("bridge"));
    const auto& b = p.flag("bridge") ? est : other;
    const auto& g = p.flag("bridge") ? other : est;
    s.add({std::to_string(steps), num(b.mean), num(b.std_error), num(g.mean), num(g.std_error), num(closed)});
    r.summary["estimate"] = est.mean;
    r.summary["std_error"] = est.std_error;
    r.summary["paths"] = est.paths;
    r.summary["steps"] = steps;
    r.summary["bridge_correction"] = p.flag("bridge");
    r.summary["closed_form"] = closed;
    r.summary["z_score"] = est.std_error > 0 ? (est.mean - closed) / est.std_error : 0.0;
    r.series.push_back(std::move(s));
    return r;
}

// ---------------------------------------------------------------- kelly

Report run_kelly(const Params& p) {
    const auto file = p.path("prices");
    const auto table = core::CsvTable::read_file(file);
    const auto c_time = table.column("timestamp");
    std::vector<std::size_t> cols;
    std::vector<std::string> names;
    for (std::size_t c = 0; c < table.header().size(); ++c) {
        if (c == c_time) continue;
        cols.push_back(c);
        names.push_back(table.header()[c]);
    }
    if (cols.empty()) throw DataError(fmt::format("{}:1: no asset columns besides 'timestamp'", file));

    std::vector<std::vector<double>> returns;
    std::vector<core::ReturnStats> stats;
    for (std::size_t c : cols) {
        std::vector<core::Observation> obs;
        for (const auto& row : table.rows())
            obs.push_back({core::parse_timestamp(table.text(row, c_time)), table.number(row, c)});
        const core::PriceSeries series(std::move(obs));
        returns.push_back(core::log_returns(series));
        stats.push_back(core::return_stats(series));
    }
    const auto n = static_cast<Eigen::Index>(cols.size());
    const double ppy = stats.front().periods_per_year;
    const std::size_t m = returns.front().size();
    if (m < 2) throw DataError(fmt::format("{}: need at least three price rows", file));

    // annualized sample covariance of log returns
    Eigen::MatrixXd cov(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < m; ++k)
                acc += (returns[i][k] - stats[i].mean) * (returns[j][k] - stats[j].mean);
            cov(i, j) = acc / static_cast<double>(m - 1) * ppy;
        }
    // arithmetic drift of the lognormal: log mean plus half the variance
    Eigen::VectorXd mu(n);
    for (Eigen::Index i = 0; i < n; ++i) mu(i) = stats[i].annualized_mean() + 0.5 * cov(i, i);
    const double rate = p.number("rate");
    const Eigen::VectorXd w = core::kelly_weights(mu, rate, cov);

    Report r;
    Series s{"weights", {"asset", "mean_log_return_pct", "drift_pct", "vol_pct", "sharpe", "kelly_weight"}, {}};
    json weights = json::object();
    for (Eigen::Index i = 0; i < n; ++i) {
        double sharpe = std::nan("");
        try {
            sharpe = core::sharpe_ratio(stats[i], rate);
        } catch (const NumericError&) {
        }
        s.add({names[i], num(pct(stats[i].annualized_mean())), num(pct(mu(i))), num(pct(stats[i].annualized_vol())),
               num(sharpe), num(w(i))});
        weights[names[i]] = w(i);
    }
    r.summary["assets"] = names.size();
    r.summary["periods_per_year"] = ppy;
    r.summary["riskless_rate"] = rate;
    r.summary["weights"] = weights;
    r.summary["gross_leverage"] = w.cwiseAbs().sum();
    r.series.push_back(std::move(s));
    return r;
}

std::vector<Command> build() {
    using K = FieldKind;
    const auto num_field = [](std::string key, double fallback, std::string help) {
        return Field{std::move(key), K::Number, std::move(help), false, fallback, {}, {}};
    };
    const auto opt = [](std::string key, K kind, std::string help, json fallback = nullptr) {
        return Field{std::move(key), kind, std::move(help), false, std::move(fallback), {}, {}};
    };
    const auto need = [](std::string key, K kind, std::string help, std::vector<std::string> columns = {}) {
        return Field{std::move(key), kind, std::move(help), true, nullptr, std::move(columns), {}};
    };

    std::vector<Command> out;
    out.push_back({"stake",
                   {"stake"},
                   "Percentile bands of daily annualized staking returns",
                   {need("validators", K::Path, "CSV validator_id,timestamp,balance,state",
                         {"validator_id", "timestamp", "balance", "state"}),
                    opt("day", K::Text, "single day YYYY-MM-DD (default: every day in the data)"),
                    opt("levels", K::NumberList, "percentile levels", json{1, 5, 25, 50, 75, 95, 99})},
                   run_stake});
    out.push_back({"amm",
                   {"amm"},
                   "Replay a constant-product pool against an external price path",
                   {need("prices", K::Path, "CSV timestamp,price (token-y per token-x)", {"timestamp", "price"}),
                    need("reserve_x", K::Number, "initial x reserve"), need("reserve_y", K::Number, "initial y reserve"),
                    num_field("fee", 0.003, "fee fraction"), num_field("gas_cost", 0.0, "arbitrage gas cost in y"),
                    num_field("noise_volume", 0.0, "seeded round-trip noise trade size as a fraction of reserve x"),
                    opt("fee_yield", K::Number, "annual fee yield alpha for the long-run yield"),
                    num_field("horizon_years", 1.0, "horizon for the long-run yield")},
                   run_amm});
    out.push_back({"loan",
                   {"loan", "price"},
                   "Value an over-collateralized loan as an exchange option",
                   {need("collateral", K::Number, "numeraire value A of the collateral"),
                    need("repayment", K::Number, "numeraire value B of the repayment"),
                    num_field("sigma_alpha", 0.0, "collateral token vol"), num_field("sigma_beta", 0.0, "loan token vol"),
                    num_field("rho", 0.0, "correlation"), num_field("r_alpha", 0.0, "collateral token rate"),
                    num_field("r_beta", 0.0, "loan token rate"), num_field("maturity", 1.0, "years"),
                    num_field("barrier", 1.2, "liquidation collateralization"),
                    num_field("penalty", 0.0, "liquidation penalty fraction of B"),
                    opt("utilization", K::Number, "pool utilization for the borrow rate"),
                    num_field("kink", 0.8, "utilization kink"), num_field("base_rate", 0.0, "borrow rate at zero"),
                    num_field("slope_low", 0.04, "slope below the kink"),
                    num_field("slope_high", 0.75, "slope above the kink"),
                    opt("sweep_points", K::Integer, "points in the collateralization sweep", 26)},
                   run_loan});
    out.push_back({"perp-funding",
                   {"perp", "funding"},
                   "Funding rates and accrual from mark/index observations",
                   {need("input", K::Path, "CSV timestamp,mark,index", {"timestamp", "mark", "index"}),
                    Field{"variant", K::Text, "deribit or bitmex", false, "deribit", {}, {"deribit", "bitmex"}},
                    num_field("band", perps::kDefaultBand, "clamp or deadband width"),
                    num_field("interest_rate", 0.0001, "interest component per interval (bitmex)"),
                    num_field("interval_hours", perps::kDefaultIntervalHours, "funding interval"),
                    num_field("notional", 1.0, "long position notional")},
                   run_perp_funding});
    out.push_back({"perp-basis",
                   {"perp", "basis"},
                   "Futures basis and implied rates",
                   {need("input", K::Path, "CSV timestamp,perp,future,expiry", {"timestamp", "perp", "future", "expiry"}),
                    opt("window_days", K::Integer, "rolling window", 7)},
                   run_perp_basis});
    out.push_back({"implied-rate",
                   {"implied-rate"},
                   "Put-call parity implied rates from option chains",
                   {need("input", K::Path, "CSV quote_time,expiry,strike,call,put,underlying",
                         {"quote_time", "expiry", "strike", "call", "put", "underlying"}),
                    opt("windows", K::NumberList, "rolling windows in days", json{7, 30})},
                   run_implied_rate});
    out.push_back({"xccy",
                   {"xccy", "simulate"},
                   "Replay a cross-currency swap scenario",
                   {need("scenario", K::Path, "scenario JSON (terms, holdings, events)")},
                   run_xccy});
    out.push_back({"oracle",
                   {"oracle", "price"},
                   "Monte Carlo price against the closed form",
                   {Field{"kind", K::Text, "exchange or one-touch", false, "exchange", {}, {"exchange", "one-touch"}},
                    num_field("s0_a", 1.0, "exchange: initial A"), num_field("s0_b", 1.0, "exchange: initial B"),
                    num_field("sigma_a", 0.2, "exchange: vol of A"), num_field("sigma_b", 0.0, "exchange: vol of B"),
                    num_field("rho", 0.0, "exchange: correlation"), num_field("r", 0.0, "exchange: numeraire rate"),
                    num_field("r_alpha", 0.0, "exchange: rate of A's token"),
                    num_field("r_beta", 0.0, "exchange: rate of B's token"),
                    num_field("spot_ratio", 1.5, "one-touch: initial ratio"),
                    num_field("barrier", 1.2, "one-touch: barrier"), num_field("payout", 1.0, "one-touch: payout"),
                    num_field("sigma", 0.8, "one-touch: ratio vol"), num_field("rate", 0.0, "one-touch: discount rate"),
                    num_field("drift", 0.0, "one-touch: ratio drift"), num_field("maturity", 1.0, "years"),
                    opt("steps", K::Integer, "one-touch: time steps", 1000),
                    opt("paths", K::Integer, "simulated paths", 100000),
                    opt("antithetic", K::Bool, "antithetic variates", true),
                    opt("bridge", K::Bool, "one-touch: Brownian-bridge crossing correction", true)},
                   run_oracle});
    out.push_back({"kelly",
                   {"kelly"},
                   "Sharpe ratios and Kelly weights from price histories",
                   {need("prices", K::Path, "CSV timestamp,<asset>,<asset>...", {"timestamp"}),
                    num_field("rate", 0.0, "riskless rate")},
                   run_kelly});
    return out;
}

} // namespace

const std::vector<Command>& commands() {
    static const std::vector<Command> all = build();
    return all;
}

const Command* find_command(std::string_view name) {
    for (const auto& c : commands())
        if (c.name == name) return &c;
    return nullptr;
}

} // namespace cyield::app
