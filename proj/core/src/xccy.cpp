#include "cryptoyield/xccy.hpp"

#include "cryptoyield/error.hpp"
#include "cryptoyield/lending.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

namespace cyield::xccy {

Party other(Party p) { return p == Party::A ? Party::B : Party::A; }

std::string to_string(Party p) { return p == Party::A ? "A" : "B"; }
std::string to_string(Token t) { return t == Token::Alpha ? "alpha" : "beta"; }

std::string to_string(Account a) {
    switch (a) {
    case Account::PartyA: return "A";
    case Account::PartyB: return "B";
    case Account::Contract: return "contract";
    }
    return "?";
}

std::string to_string(SwapState s) {
    switch (s) {
    case SwapState::Created: return "Created";
    case SwapState::Active: return "Active";
    case SwapState::Matured: return "Matured";
    case SwapState::TerminatedBreach: return "TerminatedBreach";
    case SwapState::TerminatedVoluntary: return "TerminatedVoluntary";
    }
    return "?";
}

void SwapTerms::validate() const {
    if (!(notional_a > 0)) throw DomainError("notional must be positive");
    if (!(initial_rate > 0)) throw DomainError("initial exchange rate must be positive");
    if (final_rate && !(*final_rate > 0)) throw DomainError("final exchange rate must be positive");
    if (!(margin_a > 0) || !(margin_b > 0)) throw DomainError("margins must be positive");
    if (!(threshold >= 0 && threshold < 1)) throw DomainError("threshold must lie in [0, 1)");
    if (!(required_margin_fraction >= 0)) throw DomainError("required margin fraction must be non-negative");
    if (!(termination_fee >= 0)) throw DomainError("termination fee must be non-negative");
    if (!(days_per_year > 0)) throw DomainError("days per year must be positive");
}

Holdings& LedgerState::at(Account a) {
    switch (a) {
    case Account::PartyA: return party_a;
    case Account::PartyB: return party_b;
    case Account::Contract: break;
    }
    return contract;
}

const Holdings& LedgerState::at(Account a) const { return const_cast<LedgerState*>(this)->at(a); }

Rational LedgerState::total(Token t) const {
    const auto pick = [t](const Holdings& h) -> const Rational& { return t == Token::Alpha ? h.alpha : h.beta; };
    return pick(party_a) + pick(party_b) + pick(contract);
}

namespace {

Account account_of(Party p) { return p == Party::A ? Account::PartyA : Account::PartyB; }

Rational& balance(LedgerState& l, Account a, Token t) {
    auto& h = l.at(a);
    return t == Token::Alpha ? h.alpha : h.beta;
}

const Rational& balance(const LedgerState& l, Account a, Token t) {
    const auto& h = l.at(a);
    return t == Token::Alpha ? h.alpha : h.beta;
}

void ensure_funds(const LedgerState& l, Account a, Token t, const Rational& amount) {
    if (balance(l, a, t) < amount)
        throw DataError(fmt::format("{} holds insufficient {} ({} needed)", to_string(a), to_string(t),
                                    core::to_string(amount)));
}

Token margin_token(Party p) { return p == Party::A ? Token::Alpha : Token::Beta; }

} // namespace

SwapAgreement::SwapAgreement(SwapTerms terms, LedgerState holdings) : terms_(std::move(terms)), ledger_(std::move(holdings)) {
    terms_.validate();
    for (Account a : {Account::PartyA, Account::PartyB, Account::Contract})
        for (Token t : {Token::Alpha, Token::Beta})
            if (balance(ledger_, a, t) < 0) throw DomainError("initial holdings must be non-negative");
}

void SwapAgreement::require_active(const char* op) const {
    if (state_ != SwapState::Active)
        throw StateError(fmt::format("{} requires an Active swap (state is {})", op, to_string(state_)));
}

void SwapAgreement::transfer(Timestamp time, const std::string& event, Account from, Account to, Token token,
                             const Rational& amount) {
    if (amount == 0) return;
    if (amount < 0) throw DomainError("transfer amount must be non-negative");
    ensure_funds(ledger_, from, token, amount);
    balance(ledger_, from, token) -= amount;
    balance(ledger_, to, token) += amount;
    audit_.push_back(LedgerEntry{audit_.size(), time, event, from, to, token, amount});
}

void SwapAgreement::initiate(Timestamp time) {
    if (state_ != SwapState::Created)
        throw StateError(fmt::format("initiate requires a Created swap (state is {})", to_string(state_)));
    const Rational nb = terms_.notional_b();
    if (terms_.margin_a < terms_.required_margin_fraction * terms_.notional_a)
        throw DomainError("margin of party A is below the sizing rule");
    if (terms_.margin_b < terms_.required_margin_fraction * nb)
        throw DomainError("margin of party B is below the sizing rule");
    ensure_funds(ledger_, Account::PartyA, Token::Alpha, terms_.notional_a + terms_.margin_a);
    ensure_funds(ledger_, Account::PartyB, Token::Beta, nb + terms_.margin_b);

    transfer(time, "notional", Account::PartyA, Account::PartyB, Token::Alpha, terms_.notional_a);
    transfer(time, "notional", Account::PartyB, Account::PartyA, Token::Beta, nb);
    transfer(time, "margin", Account::PartyA, Account::Contract, Token::Alpha, terms_.margin_a);
    transfer(time, "margin", Account::PartyB, Account::Contract, Token::Beta, terms_.margin_b);
    margin_a_ = init_margin_a_ = terms_.margin_a;
    margin_b_ = init_margin_b_ = terms_.margin_b;
    state_ = SwapState::Active;
}

Exposure SwapAgreement::exposure_at(const Rational& rate) const {
    Exposure e;
    e.rate = rate;
    e.gain_a = terms_.notional_a * (rate - terms_.reexchange_rate());
    e.adverse_a = e.gain_a < 0 ? Rational(-e.gain_a) : Rational(0);
    e.adverse_b = e.gain_a > 0 ? e.gain_a : Rational(0);
    e.residual_a = margin_a_ - e.adverse_a / rate;
    e.residual_b = margin_b_ - e.adverse_b;
    e.fraction_a = e.residual_a / init_margin_a_;
    e.fraction_b = e.residual_b / init_margin_b_;
    return e;
}

void SwapAgreement::accept_tick(const OracleTick& tick) {
    if (!(tick.rate > 0)) throw DomainError("oracle rate must be positive");
    if (last_tick_ && tick.time <= last_tick_->time)
        throw DataError(fmt::format("stale or out-of-order oracle tick at t={}", tick.time));
    last_tick_ = tick;
}

Exposure SwapAgreement::mark(const OracleTick& tick) {
    require_active("mark");
    accept_tick(tick);
    last_exposure_ = exposure_at(tick.rate);
    return *last_exposure_;
}

Settlement SwapAgreement::settle(Timestamp time, const Rational& rate, const std::string& event) {
    const Exposure e = exposure_at(rate);
    Settlement s;
    if (e.adverse_b > 0) {
        const Rational paid = std::min(e.adverse_b, margin_b_);
        transfer(time, event, Account::Contract, Account::PartyA, Token::Beta, paid);
        margin_b_ -= paid;
        s.exposure_paid = paid;
        s.uncollateralized_loss = e.adverse_b - paid;
    } else if (e.adverse_a > 0) {
        const Rational owed = e.adverse_a / rate;
        const Rational paid = std::min(owed, margin_a_);
        transfer(time, event, Account::Contract, Account::PartyB, Token::Alpha, paid);
        margin_a_ -= paid;
        s.exposure_paid = paid * rate;
        s.uncollateralized_loss = (owed - paid) * rate;
    }
    return s;
}

void SwapAgreement::release_margins(Timestamp time, const std::string& event) {
    transfer(time, event, Account::Contract, Account::PartyA, Token::Alpha, margin_a_);
    transfer(time, event, Account::Contract, Account::PartyB, Token::Beta, margin_b_);
    margin_a_ = 0;
    margin_b_ = 0;
}

std::optional<Settlement> SwapAgreement::check_and_terminate(const OracleTick& tick) {
    const Exposure e = mark(tick);
    std::optional<Party> breacher;
    if (e.fraction_a < terms_.threshold)
        breacher = Party::A;
    else if (e.fraction_b < terms_.threshold)
        breacher = Party::B;
    if (!breacher) return std::nullopt;

    Settlement s = settle(tick.time, tick.rate, "breach-settlement");
    s.breaching_party = breacher;
    release_margins(tick.time, "margin-return");
    state_ = SwapState::TerminatedBreach;
    terminated_by_ = breacher;
    return s;
}

Exposure SwapAgreement::replenish(Party party, const Rational& amount, Timestamp time) {
    require_active("replenish");
    if (!(amount > 0)) throw DomainError("replenishment must be positive");
    transfer(time, "replenish", account_of(party), Account::Contract, margin_token(party), amount);
    (party == Party::A ? margin_a_ : margin_b_) += amount;
    last_exposure_ = exposure_at(last_tick_ ? last_tick_->rate : terms_.initial_rate);
    return *last_exposure_;
}

Settlement SwapAgreement::voluntary_terminate(Party party, const OracleTick& tick) {
    require_active("voluntary_terminate");
    if (last_tick_ && (tick.time < last_tick_->time || (tick.time == last_tick_->time && tick.rate != last_tick_->rate)))
        throw DataError("termination tick is older than the last oracle tick");
    if (!(tick.rate > 0)) throw DomainError("oracle rate must be positive");
    if (!last_tick_ || tick.time > last_tick_->time) last_tick_ = tick;

    Settlement s = settle(tick.time, tick.rate, "exit-settlement");
    s.terminating_party = party;
    const Token tok = margin_token(party);
    Rational& margin = party == Party::A ? margin_a_ : margin_b_;
    s.fee_paid = std::min(terms_.termination_fee, margin);
    s.fee_shortfall = terms_.termination_fee - s.fee_paid;
    transfer(tick.time, "termination-fee", Account::Contract, account_of(other(party)), tok, s.fee_paid);
    margin -= s.fee_paid;
    release_margins(tick.time, "margin-return");
    state_ = SwapState::TerminatedVoluntary;
    terminated_by_ = party;
    return s;
}

void SwapAgreement::mature(Timestamp time) {
    require_active("mature");
    if (terms_.maturity && time < *terms_.maturity) throw StateError("swap has not reached its maturity date");
    const Rational beta_back = terms_.notional_a * terms_.reexchange_rate();
    ensure_funds(ledger_, Account::PartyA, Token::Beta, beta_back);
    ensure_funds(ledger_, Account::PartyB, Token::Alpha, terms_.notional_a);
    transfer(time, "reexchange", Account::PartyA, Account::PartyB, Token::Beta, beta_back);
    transfer(time, "reexchange", Account::PartyB, Account::PartyA, Token::Alpha, terms_.notional_a);
    release_margins(time, "margin-return");
    state_ = SwapState::Matured;
}

LegFlows SwapAgreement::accrue_legs(const LegPeriod& period) {
    require_active("accrue_legs");
    if (period.days < 0) throw DomainError("accrual period must be non-negative");
    const auto leg_rate = [](const LegSpec& leg, const std::optional<Rational>& fixing, const char* name) {
        if (leg.kind == RateKind::Fixed) return Rational(leg.fixed_rate + leg.spread);
        if (!fixing) throw DataError(fmt::format("missing floating fixing for leg {}", name));
        return Rational(*fixing + leg.spread);
    };
    const Rational year_frac = period.days / terms_.days_per_year;
    LegFlows f;
    f.alpha_to_a = terms_.notional_a * leg_rate(terms_.leg_a, period.floating_a, "a") * year_frac;
    f.beta_to_b = terms_.notional_b() * leg_rate(terms_.leg_b, period.floating_b, "b") * year_frac;

    const auto alpha_from = f.alpha_to_a >= 0 ? Account::PartyB : Account::PartyA;
    const auto beta_from = f.beta_to_b >= 0 ? Account::PartyA : Account::PartyB;
    const Rational alpha_amt = boost::multiprecision::abs(f.alpha_to_a);
    const Rational beta_amt = boost::multiprecision::abs(f.beta_to_b);
    ensure_funds(ledger_, alpha_from, Token::Alpha, alpha_amt);
    ensure_funds(ledger_, beta_from, Token::Beta, beta_amt);
    transfer(period.time, "leg-a", alpha_from, alpha_from == Account::PartyA ? Account::PartyB : Account::PartyA,
             Token::Alpha, alpha_amt);
    transfer(period.time, "leg-b", beta_from, beta_from == Account::PartyA ? Account::PartyB : Account::PartyA,
             Token::Beta, beta_amt);
    return f;
}

double buffer_size(double sigma, double duration_years, double multiplier) {
    if (!(sigma >= 0.0)) throw DomainError("volatility must be non-negative");
    if (!(duration_years > 0.0)) throw DomainError("duration must be positive");
    if (!(multiplier > 0.0)) throw DomainError("multiplier must be positive");
    return std::min(multiplier * sigma * std::sqrt(duration_years), 1.0);
}

LeverageBound max_leverage(double margin_fraction, std::size_t chain_length) {
    if (!(margin_fraction > 0.0 && margin_fraction < 1.0)) throw DomainError("margin fraction must lie in (0, 1)");
    return LeverageBound{lending::recycling_leverage_limit(margin_fraction),
                         lending::recycling_leverage(margin_fraction, chain_length)};
}

} // namespace cyield::xccy
