#pragma once

// Margin-based cross-currency swap between party A (delivers token alpha) and
// party B (delivers token beta). Token amounts are exact rationals so that
// conservation can be asserted exactly; exchange rates are beta per alpha.

#include "cryptoyield/core/rational.hpp"
#include "cryptoyield/core/time.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cyield::xccy {

using core::Rational;
using core::Timestamp;

enum class Party { A, B };
enum class Token { Alpha, Beta };
enum class Account { PartyA, PartyB, Contract };
enum class SwapState { Created, Active, Matured, TerminatedBreach, TerminatedVoluntary };

Party other(Party p);
std::string to_string(Party p);
std::string to_string(Token t);
std::string to_string(Account a);
std::string to_string(SwapState s);

enum class RateKind { Fixed, Floating };

// Periodic interest leg: (rate + spread) * notional * days / days_per_year.
struct LegSpec {
    RateKind kind = RateKind::Fixed;
    Rational fixed_rate = 0;
    Rational spread = 0;
};

struct SwapTerms {
    Rational notional_a;    // alpha delivered by A at inception
    Rational initial_rate;  // X0, beta per alpha; notional_b = notional_a * X0
    std::optional<Rational> final_rate;  // re-exchange rate at maturity, defaults to X0
    Rational margin_a;  // alpha, posted by A
    Rational margin_b;  // beta, posted by B
    Rational required_margin_fraction = Rational(1, 20);  // margin >= fraction * own notional
    Rational threshold = Rational(1, 2);  // breach when residual / initial margin < threshold
    Rational termination_fee = 0;         // in the terminating party's margin token
    LegSpec leg_a;                        // on notional_a in alpha, B pays A
    LegSpec leg_b;                        // on notional_b in beta, A pays B
    Rational days_per_year = 365;
    std::optional<Timestamp> maturity;  // earliest time mature() is allowed

    Rational notional_b() const { return notional_a * initial_rate; }
    Rational reexchange_rate() const { return final_rate ? *final_rate : initial_rate; }
    void validate() const;
};

struct Holdings {
    Rational alpha = 0;
    Rational beta = 0;
};

// Balances of both parties and the contract. Totals per token never change.
struct LedgerState {
    Holdings party_a;
    Holdings party_b;
    Holdings contract;

    Holdings& at(Account a);
    const Holdings& at(Account a) const;
    Rational total(Token t) const;
};

struct OracleTick {
    Timestamp time = 0;
    Rational rate;  // X_t, beta per alpha
};

struct Exposure {
    Rational rate;
    Rational gain_a;      // mark-to-market gain of A in beta units; B's is -gain_a
    Rational adverse_a;   // max(-gain_a, 0), beta units
    Rational adverse_b;   // max(gain_a, 0), beta units
    Rational residual_a;  // A's margin less adverse exposure, alpha units
    Rational residual_b;  // B's margin less adverse exposure, beta units
    Rational fraction_a;  // residual / initial margin
    Rational fraction_b;
};

struct Settlement {
    std::optional<Party> breaching_party;
    std::optional<Party> terminating_party;
    Rational exposure_paid = 0;        // beta units, transferred out of the loser's margin
    Rational uncollateralized_loss = 0;  // beta units the margin could not cover
    Rational fee_paid = 0;             // in the terminating party's margin token
    Rational fee_shortfall = 0;
};

struct LegPeriod {
    Timestamp time = 0;
    Rational days = 0;
    std::optional<Rational> floating_a;  // fixings for floating legs
    std::optional<Rational> floating_b;
};

struct LegFlows {
    Rational alpha_to_a = 0;  // signed: negative means A paid B
    Rational beta_to_b = 0;   // signed: negative means B paid A
};

struct LedgerEntry {
    std::size_t seq = 0;
    Timestamp time = 0;
    std::string event;
    Account from = Account::PartyA;
    Account to = Account::PartyA;
    Token token = Token::Alpha;
    Rational amount = 0;
};

class SwapAgreement {
public:
    SwapAgreement(SwapTerms terms, LedgerState holdings);

    // Exchanges notionals and locks both margins. Rejects undersized margins.
    void initiate(Timestamp time = 0);

    // Mark-to-market against an oracle tick; ticks must be strictly increasing.
    Exposure mark(const OracleTick& tick);

    // Marks the tick and terminates with breach settlement when either residual
    // margin fraction is below the threshold.
    std::optional<Settlement> check_and_terminate(const OracleTick& tick);

    // Adds margin; returns the exposure re-evaluated at the last tick.
    Exposure replenish(Party party, const Rational& amount, Timestamp time = 0);

    // Exit for the fixed fee; exposures settled from margins at `tick`.
    Settlement voluntary_terminate(Party party, const OracleTick& tick);

    // Reverses the notional exchange at the re-exchange rate and returns margins.
    void mature(Timestamp time);

    LegFlows accrue_legs(const LegPeriod& period);

    SwapState state() const { return state_; }
    std::optional<Party> terminated_by() const { return terminated_by_; }
    const SwapTerms& terms() const { return terms_; }
    const LedgerState& ledger() const { return ledger_; }
    const std::vector<LedgerEntry>& audit() const { return audit_; }
    const Rational& posted_margin(Party p) const { return p == Party::A ? margin_a_ : margin_b_; }
    const Rational& initial_margin(Party p) const { return p == Party::A ? init_margin_a_ : init_margin_b_; }
    std::optional<OracleTick> last_tick() const { return last_tick_; }
    // Exposure computed by the most recent mark, check or replenishment.
    const std::optional<Exposure>& last_exposure() const { return last_exposure_; }

private:
    void require_active(const char* op) const;
    void accept_tick(const OracleTick& tick);
    Exposure exposure_at(const Rational& rate) const;
    void transfer(Timestamp time, const std::string& event, Account from, Account to, Token token,
                  const Rational& amount);
    Settlement settle(Timestamp time, const Rational& rate, const std::string& event);
    void release_margins(Timestamp time, const std::string& event);

    SwapTerms terms_;
    LedgerState ledger_;
    SwapState state_ = SwapState::Created;
    std::optional<Party> terminated_by_;
    Rational margin_a_ = 0;
    Rational margin_b_ = 0;
    Rational init_margin_a_ = 0;
    Rational init_margin_b_ = 0;
    std::optional<OracleTick> last_tick_;
    std::optional<Exposure> last_exposure_;
    std::vector<LedgerEntry> audit_;
};

// Margin fraction growing with the square root of the swap's duration:
// c * sigma * sqrt(T), capped at 1.
double buffer_size(double sigma, double duration_years, double multiplier = 1.0);

struct LeverageBound {
    double supremum = 0.0;    // 1 / x
    double achievable = 0.0;  // sum_{i<n} (1 - x)^i
};

LeverageBound max_leverage(double margin_fraction, std::size_t chain_length);

} // namespace cyield::xccy
