#pragma once

#include "cryptoyield/core/time.hpp"
#include "cryptoyield/error.hpp"

#include <span>
#include <string>
#include <vector>

namespace cyield::staking {

using core::Day;
using core::Timestamp;

inline constexpr double kMinimumStake = 32.0;  // ETH
inline constexpr double kDaysPerYear = 365.0;

enum class ValidatorState { Active, Other };

struct BalanceSnapshot {
    Timestamp time = 0;
    double balance = 0.0;  // ETH
};

// Closed interval [from, to] during which the validator was in `state`.
struct StateInterval {
    Timestamp from = 0;
    Timestamp to = 0;
    ValidatorState state = ValidatorState::Other;
};

struct ValidatorRecord {
    std::string id;
    std::vector<BalanceSnapshot> balances;  // strictly increasing in time
    std::vector<StateInterval> state_intervals;

    void validate() const;
};

struct StakingReturn {
    Day date;
    double annualized_return = 0.0;  // fraction per 365 days
};

struct EligibilityError : Error {
    explicit EligibilityError(const std::string& what) : Error(Kind::Input, what) {}
};

// Active for the whole of [day-1 00:00, day 00:00] and every snapshot in that
// window at or above the 32 ETH minimum. Missing state data counts as not Active.
bool is_eligible(const ValidatorRecord& v, Day day);

// 365 * (V_t / V_{t-1} - 1) with V sampled at 00:00 UTC of day-1 and day.
// Throws DataError when either snapshot is missing and EligibilityError when
// the validator does not qualify for the period.
StakingReturn daily_return(const ValidatorRecord& v, Day day);

// min(3 * N%, 100); `network_fraction_pct` in [0, 100].
double slash_cost(double network_fraction_pct);

struct CohortBands {
    Day date;
    std::size_t eligible = 0;
    std::vector<double> levels;   // requested percentiles
    std::vector<double> returns;  // annualized return at each level
};

// Percentiles of daily_return over every eligible validator. DataError when
// no validator qualifies.
CohortBands percentile_bands(std::span<const ValidatorRecord> validators, Day day, std::span<const double> percentiles);

// CSV `validator_id,timestamp,balance,state`, one row per snapshot. A state
// interval is Active only between consecutive snapshots that are both Active
// (state values starting with "active", case-insensitive).
std::vector<ValidatorRecord> read_validators_csv(const std::string& path);

} // namespace cyield::staking
