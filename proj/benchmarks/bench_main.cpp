#include "cryptoyield/amm/pool.hpp"
#include "cryptoyield/lending.hpp"
#include "cryptoyield/mc/oracle.hpp"
#include "cryptoyield/perps.hpp"

#include <benchmark/benchmark.h>

#include <vector>

using namespace cyield;

static void BM_FloatSwap(benchmark::State& state) {
    auto pool = amm::FloatPool::create(1e6, 2e6, 0.003);
    bool flip = false;
    for (auto _ : state) {
        const auto r = flip ? pool.swap_y_for_x(200.0) : pool.swap_x_for_y(100.0);
        benchmark::DoNotOptimize(r.amount_out);
        flip = !flip;
    }
}
BENCHMARK(BM_FloatSwap);

static void BM_ExactSwap(benchmark::State& state) {
    for (auto _ : state) {
        state.PauseTiming();
        auto pool = amm::ExactPool::create(1000, 1000, core::Rational(3, 1000));
        state.ResumeTiming();
        for (int i = 0; i < 8; ++i) {
            const auto out = pool.swap_x_for_y(core::Rational(10 + i)).amount_out;
            benchmark::DoNotOptimize(pool.swap_y_for_x(out).amount_out);
        }
    }
    state.SetItemsProcessed(state.iterations() * 16);
}
BENCHMARK(BM_ExactSwap);

static void BM_Margrabe(benchmark::State& state) {
    lending::LoanTerms t;
    t.collateral = 150;
    t.repayment = 100;
    t.sigma_alpha = 0.8;
    t.sigma_beta = 0.1;
    t.rho = 0.2;
    t.r_alpha = 0.01;
    t.r_beta = 0.03;
    for (auto _ : state) {
        benchmark::DoNotOptimize(lending::margrabe_exchange_value(t));
        t.collateral += 1e-9;
    }
}
BENCHMARK(BM_Margrabe);

static void BM_OneTouchClosedForm(benchmark::State& state) {
    lending::OneTouchSpec s{1.5, 1.2, 0.08, 0.8, 0.0, 0.0, 1.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(lending::one_touch_value(s));
        s.spot_ratio += 1e-12;
    }
}
BENCHMARK(BM_OneTouchClosedForm);

static void BM_McExchange(benchmark::State& state) {
    mc::GbmSpec g;
    g.s0_a = 150;
    g.s0_b = 100;
    g.sigma_a = 0.8;
    g.sigma_b = 0.1;
    g.paths = static_cast<std::size_t>(state.range(0));
    g.workers = 1;
    for (auto _ : state)
        benchmark::DoNotOptimize(mc::price_payoff(g, [](double a, double b) { return a > b ? a - b : 0.0; }, 0.0));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_McExchange)->Arg(1 << 14)->Arg(1 << 18)->Unit(benchmark::kMillisecond);

static void BM_FirstPassage(benchmark::State& state) {
    mc::RatioProcessSpec s;
    s.s0 = 1.5;
    s.sigma = 0.8;
    s.steps = static_cast<std::size_t>(state.range(0));
    s.paths = 1 << 13;
    s.workers = 1;
    for (auto _ : state) benchmark::DoNotOptimize(mc::first_passage_value(s, 1.2, 0.08, 0.0));
    state.SetItemsProcessed(state.iterations() * state.range(0) * s.paths);
}
BENCHMARK(BM_FirstPassage)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_FundingEvents(benchmark::State& state) {
    std::vector<perps::MarkIndexObservation> obs;
    for (int i = 0; i < state.range(0); ++i)
        obs.push_back({i * 28800, {100.0 + 0.01 * (i % 17 - 8), 100.0}});
    const perps::FundingSpec spec;
    for (auto _ : state) {
        const auto ev = perps::funding_events(spec, obs);
        benchmark::DoNotOptimize(perps::funding_accrual(1.0, ev));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FundingEvents)->Arg(1 << 12);

BENCHMARK_MAIN();
