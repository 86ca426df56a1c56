#include "cryptoyield/perps.hpp"

#include "cryptoyield/core/csv.hpp"
#include "cryptoyield/error.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

namespace cyield::perps {

void FundingSpec::validate() const {
    if (!(interval_hours > 0.0)) throw DomainError("funding interval must be positive");
    if (!(band >= 0.0)) throw DomainError("funding band must be non-negative");
    if (!std::isfinite(interest_rate)) throw DomainError("interest rate must be finite");
}

double shiller_anchor(double dividend, double rate, double prev_settlement) {
    if (!(prev_settlement > 0.0)) throw DomainError("previous settlement price must be positive");
    return dividend - rate * prev_settlement;
}

double premium_rate(const MarkIndexPair& pair) {
    if (!(pair.index_price > 0.0)) throw DomainError("index price must be positive");
    if (!(pair.mark_price > 0.0)) throw DomainError("mark price must be positive");
    return (pair.mark_price - pair.index_price) / pair.index_price;
}

double deribit_funding(double premium, double band) {
    if (!(band >= 0.0)) throw DomainError("funding band must be non-negative");
    return std::max(band, premium) + std::min(-band, premium);
}

double bitmex_funding(double premium_index, double interest_rate, double band) {
    if (!(band >= 0.0)) throw DomainError("funding band must be non-negative");
    return premium_index + std::clamp(interest_rate - premium_index, -band, band);
}

double funding_rate(const FundingSpec& spec, const MarkIndexPair& pair) {
    const double p = premium_rate(pair);
    switch (spec.variant) {
    case FundingVariant::DeribitDeadband: return deribit_funding(p, spec.band);
    case FundingVariant::BitMexClamp: return bitmex_funding(p, spec.interest_rate, spec.band);
    case FundingVariant::Shiller: break;
    }
    throw DomainError("the Shiller variant needs dividend and rate inputs; use shiller_anchor");
}

double funding_accrual(double position_notional, std::span<const FundingEvent> events) {
    double total = 0.0;
    for (std::size_t i = 0; i < events.size(); ++i) {
        if (i > 0 && events[i].time < events[i - 1].time)
            throw DataError(fmt::format("funding events out of order at index {}", i));
        total += position_notional * events[i].cash_flow();
    }
    return total;
}

std::vector<FundingEvent> funding_events(const FundingSpec& spec, std::span<const MarkIndexObservation> observations) {
    spec.validate();
    const double interval_secs = spec.interval_hours * 3600.0;
    std::vector<FundingEvent> out;
    out.reserve(observations.size());
    for (std::size_t i = 0; i < observations.size(); ++i) {
        const auto& o = observations[i];
        double frac = 1.0;
        if (i > 0) {
            if (o.time <= observations[i - 1].time)
                throw DataError(fmt::format("observations not strictly increasing at index {}", i));
            frac = static_cast<double>(o.time - observations[i - 1].time) / interval_secs;
        }
        out.push_back(FundingEvent{o.time, funding_rate(spec, o.pair), frac});
    }
    return out;
}

double futures_basis(double future_price, double perp_price) {
    if (!(perp_price > 0.0)) throw DomainError("perpetual price must be positive");
    if (!(future_price > 0.0)) throw DomainError("futures price must be positive");
    return (future_price - perp_price) / perp_price;
}

double implied_rate_from_basis(double basis, double tenor_years, const core::RateConvention& convention) {
    convention.validate();
    if (!(basis > -1.0)) throw DomainError("basis must exceed -1");
    if (!(tenor_years > 0.0)) throw DomainError("tenor must be positive");
    if (convention.compounding == core::Compounding::Simple) return basis / tenor_years;
    return std::log1p(basis) / tenor_years;
}

namespace {

core::Timestamp row_time(const core::CsvTable& t, const core::CsvTable::Row& row, std::size_t col) {
    try {
        return core::parse_timestamp(t.text(row, col));
    } catch (const DataError& e) {
        throw DataError(fmt::format("{}: {}", t.where(row), e.what()));
    }
}

} // namespace

std::vector<MarkIndexObservation> read_mark_index_csv(const std::string& path) {
    const auto t = core::CsvTable::read_file(path);
    const auto ct = t.column("timestamp"), cm = t.column("mark"), ci = t.column("index");
    std::vector<MarkIndexObservation> out;
    for (const auto& row : t.rows()) {
        MarkIndexObservation o{row_time(t, row, ct), {t.number(row, cm), t.number(row, ci)}};
        if (!(o.pair.mark_price > 0.0) || !(o.pair.index_price > 0.0))
            throw DomainError(fmt::format("{}: prices must be positive", t.where(row)));
        if (!out.empty() && o.time <= out.back().time)
            throw DataError(fmt::format("{}: timestamps must be strictly increasing", t.where(row)));
        out.push_back(o);
    }
    return out;
}

std::vector<BasisObservation> read_basis_csv(const std::string& path) {
    const auto t = core::CsvTable::read_file(path);
    const auto ct = t.column("timestamp"), cp = t.column("perp"), cf = t.column("future"), ce = t.column("expiry");
    std::vector<BasisObservation> out;
    for (const auto& row : t.rows()) {
        BasisObservation o{row_time(t, row, ct), t.number(row, cp), t.number(row, cf), row_time(t, row, ce)};
        if (!(o.perp > 0.0) || !(o.future > 0.0))
            throw DomainError(fmt::format("{}: prices must be positive", t.where(row)));
        if (o.expiry <= o.time) throw DomainError(fmt::format("{}: expiry must follow the timestamp", t.where(row)));
        if (!out.empty() && o.time <= out.back().time)
            throw DataError(fmt::format("{}: timestamps must be strictly increasing", t.where(row)));
        out.push_back(o);
    }
    return out;
}

} // namespace cyield::perps
