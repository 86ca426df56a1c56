#include "cryptoyield/staking.hpp"

#include "cryptoyield/core/csv.hpp"
#include "cryptoyield/core/stats.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fmt/format.h>
#include <map>

namespace cyield::staking {

void ValidatorRecord::validate() const {
    for (std::size_t i = 0; i < balances.size(); ++i) {
        if (!(balances[i].balance >= 0.0))
            throw DomainError(fmt::format("validator {}: negative balance at index {}", id, i));
        if (i > 0 && balances[i].time <= balances[i - 1].time)
            throw DataError(fmt::format("validator {}: balances not strictly increasing in time", id));
    }
    for (const auto& s : state_intervals)
        if (s.to < s.from) throw DataError(fmt::format("validator {}: state interval ends before it starts", id));
}

namespace {

bool active_throughout(const ValidatorRecord& v, Timestamp from, Timestamp to) {
    std::vector<StateInterval> active;
    for (const auto& s : v.state_intervals)
        if (s.state == ValidatorState::Active) active.push_back(s);
    std::sort(active.begin(), active.end(), [](const auto& a, const auto& b) { return a.from < b.from; });

    Timestamp covered = from;  // [from, covered] is known Active once started
    bool started = false;
    for (const auto& s : active) {
        if (s.to < covered) continue;
        if (!started) {
            if (s.from > from) return false;
            started = true;
        } else if (s.from > covered) {
            return false;
        }
        covered = std::max(covered, s.to);
        if (covered >= to) return true;
    }
    return false;
}

const BalanceSnapshot* snapshot_at(const ValidatorRecord& v, Timestamp t) {
    const auto it = std::lower_bound(v.balances.begin(), v.balances.end(), t,
                                     [](const BalanceSnapshot& b, Timestamp x) { return b.time < x; });
    if (it == v.balances.end() || it->time != t) return nullptr;
    return &*it;
}

} // namespace

bool is_eligible(const ValidatorRecord& v, Day day) {
    const Timestamp end = core::start_of(day);
    const Timestamp begin = end - core::kSecondsPerDay;
    if (!active_throughout(v, begin, end)) return false;
    for (const auto& b : v.balances)
        if (b.time >= begin && b.time <= end && b.balance < kMinimumStake) return false;
    return true;
}

StakingReturn daily_return(const ValidatorRecord& v, Day day) {
    const Timestamp end = core::start_of(day);
    const Timestamp begin = end - core::kSecondsPerDay;
    const auto* prev = snapshot_at(v, begin);
    const auto* curr = snapshot_at(v, end);
    if (prev == nullptr || curr == nullptr)
        throw DataError(fmt::format("validator {}: missing balance snapshot for {}", v.id, core::format_day(day)));
    if (!is_eligible(v, day))
        throw EligibilityError(fmt::format("validator {} not eligible on {}", v.id, core::format_day(day)));
    return StakingReturn{day, kDaysPerYear * (curr->balance / prev->balance - 1.0)};
}

double slash_cost(double network_fraction_pct) {
    if (!(network_fraction_pct >= 0.0 && network_fraction_pct <= 100.0))
        throw DomainError(fmt::format("network fraction {}% outside [0,100]", network_fraction_pct));
    return std::min(3.0 * network_fraction_pct, 100.0);
}

CohortBands percentile_bands(std::span<const ValidatorRecord> validators, Day day, std::span<const double> percentiles) {
    std::vector<double> returns;
    returns.reserve(validators.size());
    for (const auto& v : validators) {
        try {
            returns.push_back(daily_return(v, day).annualized_return);
        } catch (const EligibilityError&) {
        } catch (const DataError&) {
        }
    }
    if (returns.empty())
        throw DataError(fmt::format("no eligible validators on {}", core::format_day(day)));

    CohortBands out{day, returns.size(), std::vector<double>(percentiles.begin(), percentiles.end()), {}};
    out.returns.reserve(percentiles.size());
    for (double p : percentiles) out.returns.push_back(core::percentile(returns, p));
    return out;
}

std::vector<ValidatorRecord> read_validators_csv(const std::string& path) {
    const auto table = core::CsvTable::read_file(path);
    const auto c_id = table.column("validator_id");
    const auto c_time = table.column("timestamp");
    const auto c_bal = table.column("balance");
    const auto c_state = table.column("state");

    struct Row {
        Timestamp t;
        double balance;
        bool active;
        std::string where;
    };
    std::map<std::string, std::vector<Row>> by_id;
    for (const auto& row : table.rows()) {
        Timestamp t = 0;
        try {
            t = core::parse_timestamp(table.text(row, c_time));
        } catch (const DataError& e) {
            throw DataError(fmt::format("{}: {}", table.where(row), e.what()));
        }
        std::string state = table.text(row, c_state);
        std::transform(state.begin(), state.end(), state.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        by_id[table.text(row, c_id)].push_back({t, table.number(row, c_bal), state.rfind("active", 0) == 0,
                                                table.where(row)});
    }

    std::vector<ValidatorRecord> out;
    for (auto& [id, rows] : by_id) {
        std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.t < b.t; });
        ValidatorRecord v{id, {}, {}};
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i > 0 && rows[i].t == rows[i - 1].t)
                throw DataError(fmt::format("{}: duplicate snapshot for validator {}", rows[i].where, id));
            if (rows[i].balance < 0.0) throw DomainError(fmt::format("{}: negative balance", rows[i].where));
            v.balances.push_back({rows[i].t, rows[i].balance});
            if (!rows[i].active) continue;
            if (i + 1 < rows.size() && rows[i + 1].active)
                v.state_intervals.push_back({rows[i].t, rows[i + 1].t, ValidatorState::Active});
            else
                v.state_intervals.push_back({rows[i].t, rows[i].t, ValidatorState::Active});
        }
        out.push_back(std::move(v));
    }
    return out;
}

} // namespace cyield::staking
