#pragma once

#include "cryptoyield/core/stats.hpp"
#include "cryptoyield/core/time.hpp"

#include <span>
#include <string>
#include <vector>

namespace cyield::perps {

using core::Timestamp;

enum class FundingVariant { Shiller, BitMexClamp, DeribitDeadband };

inline constexpr double kDefaultBand = 0.0005;  // 0.05%
inline constexpr double kDefaultIntervalHours = 8.0;

struct FundingSpec {
    FundingVariant variant = FundingVariant::DeribitDeadband;
    double interval_hours = kDefaultIntervalHours;
    double band = kDefaultBand;
    double interest_rate = 0.0001;  // per interval, BitMEX variant only

    void validate() const;
};

enum class Side { Long, Short };

struct FundingEvent {
    Timestamp time = 0;
    double funding_rate = 0.0;   // per interval
    double time_fraction = 1.0;  // elapsed time / interval length

    // Positive funding: longs pay shorts.
    Side payer() const { return funding_rate >= 0.0 ? Side::Long : Side::Short; }
    // Payment made by a long of unit notional.
    double cash_flow() const { return funding_rate * time_fraction; }
};

struct MarkIndexPair {
    double mark_price = 0.0;
    double index_price = 0.0;
};

// d_t - r_t * F_{t-1}: the dividend-minus-carry term added to a perpetual's settlement.
double shiller_anchor(double dividend, double rate, double prev_settlement);

// (mark - index) / index, as a fraction.
double premium_rate(const MarkIndexPair& pair);

// max(band, p) + min(-band, p): zero inside the +-band deadband.
double deribit_funding(double premium, double band = kDefaultBand);

// P + clamp(I - P, -band, +band).
double bitmex_funding(double premium_index, double interest_rate, double band = kDefaultBand);

// Funding rate for one observation under `spec` (Shiller variant unsupported here).
double funding_rate(const FundingSpec& spec, const MarkIndexPair& pair);

// Amount paid by a position of signed notional (long > 0) over `events`:
// sum notional * rate * time_fraction. DataError when events are out of order.
double funding_accrual(double position_notional, std::span<const FundingEvent> events);

struct MarkIndexObservation {
    Timestamp time = 0;
    MarkIndexPair pair;
};

// One funding event per observation; time fractions are elapsed seconds over
// the interval, measured from the previous observation (first event: 1).
std::vector<FundingEvent> funding_events(const FundingSpec& spec, std::span<const MarkIndexObservation> observations);

// (F - perp) / perp
double futures_basis(double future_price, double perp_price);

// Annualized rate implied by a basis over `tenor_years`: ln(1 + b) / tenor for
// continuous compounding, b / tenor for simple.
double implied_rate_from_basis(double basis, double tenor_years,
                               const core::RateConvention& convention = {});

struct BasisObservation {
    Timestamp time = 0;
    double perp = 0.0;
    double future = 0.0;
    Timestamp expiry = 0;
};

// CSV `timestamp,mark,index`.
std::vector<MarkIndexObservation> read_mark_index_csv(const std::string& path);
// CSV `timestamp,perp,future,expiry`.
std::vector<BasisObservation> read_basis_csv(const std::string& path);

} // namespace cyield::perps
