#include "cryptoyield/mc/oracle.hpp"

#include "cryptoyield/error.hpp"
#include "cryptoyield/mc/philox.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fmt/format.h>
#include <thread>

namespace cyield::mc {

namespace {

// Independent samples per RNG stream. Part of the pinned stream layout.
constexpr std::size_t kUnitsPerBlock = 2048;

struct BlockSum {
    double sum = 0.0;
    double sum_sq = 0.0;
};

std::size_t sample_units(std::size_t paths, bool antithetic) { return antithetic ? paths / 2 : paths; }

unsigned worker_count(unsigned requested, std::size_t blocks) {
    unsigned n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(blocks, 1)));
}

// Runs `fn(block, first_unit, count)` for every block on a small thread pool
// and returns per-block results in block order.
template <typename Fn>
std::vector<BlockSum> run_blocks(std::size_t units, unsigned workers, Fn&& fn) {
    const std::size_t blocks = (units + kUnitsPerBlock - 1) / kUnitsPerBlock;
    std::vector<BlockSum> out(blocks);
    std::atomic<std::size_t> next{0};
    const auto work = [&] {
        for (std::size_t b = next++; b < blocks; b = next++) {
            const std::size_t first = b * kUnitsPerBlock;
            out[b] = fn(b, first, std::min(kUnitsPerBlock, units - first));
        }
    };
    const unsigned n = worker_count(workers, blocks);
    if (n <= 1) {
        work();
        return out;
    }
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    return out;
}

McEstimate reduce(const std::vector<BlockSum>& blocks, std::size_t units, std::size_t paths, double scale) {
    double sum = 0.0, sum_sq = 0.0;
    for (const auto& b : blocks) {
        sum += b.sum;
        sum_sq += b.sum_sq;
    }
    const double n = static_cast<double>(units);
    const double mean = sum / n;
    const double var = units > 1 ? std::max(sum_sq - n * mean * mean, 0.0) / (n - 1.0) : 0.0;
    return McEstimate{scale * mean, scale * std::sqrt(var / n), paths};
}

struct TerminalSampler {
    double mu_a, vol_a, mu_b, vol_b, rho, rho_perp;

    explicit TerminalSampler(const GbmSpec& s)
        : mu_a((s.drift_a - 0.5 * s.sigma_a * s.sigma_a) * s.maturity), vol_a(s.sigma_a * std::sqrt(s.maturity)),
          mu_b((s.drift_b - 0.5 * s.sigma_b * s.sigma_b) * s.maturity), vol_b(s.sigma_b * std::sqrt(s.maturity)),
          rho(s.rho), rho_perp(std::sqrt(std::max(0.0, 1.0 - s.rho * s.rho))) {}

    TerminalPair operator()(const GbmSpec& s, double z1, double z2) const {
        return {s.s0_a * std::exp(mu_a + vol_a * z1), s.s0_b * std::exp(mu_b + vol_b * (rho * z1 + rho_perp * z2))};
    }
};

} // namespace

void GbmSpec::validate() const {
    if (!(s0_a > 0.0) || !(s0_b > 0.0)) throw DomainError("initial values must be positive");
    if (!(sigma_a >= 0.0) || !(sigma_b >= 0.0)) throw DomainError("volatilities must be non-negative");
    if (!(rho >= -1.0 && rho <= 1.0)) throw DomainError("correlation must lie in [-1, 1]");
    if (!std::isfinite(drift_a) || !std::isfinite(drift_b)) throw DomainError("drifts must be finite");
    if (!(maturity > 0.0)) throw DomainError("maturity must be positive");
    if (paths < (antithetic ? 2u : 1u)) throw DomainError("too few paths");
}

std::vector<TerminalPair> simulate_terminal(const GbmSpec& spec) {
    spec.validate();
    const TerminalSampler sample(spec);
    const std::size_t units = sample_units(spec.paths, spec.antithetic);
    const std::size_t per_unit = spec.antithetic ? 2 : 1;
    std::vector<TerminalPair> out(units * per_unit);
    run_blocks(units, spec.workers, [&](std::size_t block, std::size_t first, std::size_t count) {
        PhiloxStream rng(spec.seed, block);
        for (std::size_t u = first; u < first + count; ++u) {
            const double z1 = rng.next_normal();
            const double z2 = rng.next_normal();
            out[u * per_unit] = sample(spec, z1, z2);
            if (spec.antithetic) out[u * per_unit + 1] = sample(spec, -z1, -z2);
        }
        return BlockSum{};
    });
    return out;
}

McEstimate price_payoff(const GbmSpec& spec, const Payoff& payoff, double discount_rate) {
    spec.validate();
    if (!std::isfinite(discount_rate)) throw DomainError("discount rate must be finite");
    const TerminalSampler sample(spec);
    const std::size_t units = sample_units(spec.paths, spec.antithetic);
    const auto blocks = run_blocks(units, spec.workers, [&](std::size_t block, std::size_t, std::size_t count) {
        PhiloxStream rng(spec.seed, block);
        BlockSum s;
        for (std::size_t i = 0; i < count; ++i) {
            const double z1 = rng.next_normal();
            const double z2 = rng.next_normal();
            const auto p = sample(spec, z1, z2);
            double v = payoff(p.a, p.b);
            if (spec.antithetic) {
                const auto q = sample(spec, -z1, -z2);
                v = 0.5 * (v + payoff(q.a, q.b));
            }
            s.sum += v;
            s.sum_sq += v * v;
        }
        return s;
    });
    const std::size_t paths = units * (spec.antithetic ? 2 : 1);
    return reduce(blocks, units, paths, std::exp(-discount_rate * spec.maturity));
}

void RatioProcessSpec::validate() const {
    if (!(s0 > 0.0)) throw DomainError("initial ratio must be positive");
    if (!(sigma >= 0.0)) throw DomainError("volatility must be non-negative");
    if (!std::isfinite(drift)) throw DomainError("drift must be finite");
    if (!(maturity > 0.0)) throw DomainError("maturity must be positive");
    if (steps < 1) throw DomainError("at least one time step is required");
    if (paths < (antithetic ? 2u : 1u)) throw DomainError("too few paths");
}

McEstimate first_passage_value(const RatioProcessSpec& spec, double barrier, double payout, double rate) {
    spec.validate();
    if (!(barrier > 0.0)) throw DomainError("barrier must be positive");
    if (!(payout >= 0.0)) throw DomainError("payout must be non-negative");
    if (!std::isfinite(rate)) throw DomainError("rate must be finite");

    const std::size_t units = sample_units(spec.paths, spec.antithetic);
    const std::size_t paths = units * (spec.antithetic ? 2 : 1);
    const double y0 = std::log(spec.s0 / barrier);
    if (y0 <= 0.0) return McEstimate{payout, 0.0, paths};

    const std::size_t n = spec.steps;
    const double dt = spec.maturity / static_cast<double>(n);
    const double step_mean = (spec.drift - 0.5 * spec.sigma * spec.sigma) * dt;
    const double step_vol = spec.sigma * std::sqrt(dt);
    const double bridge_scale = step_vol > 0.0 ? -2.0 / (step_vol * step_vol) : 0.0;
    const bool bridge = spec.bridge_correction && step_vol > 0.0;

    // Discounted payout for a hit inside step i (midpoint) and at grid point i+1.
    std::vector<double> pay_mid(n), pay_end(n);
    for (std::size_t i = 0; i < n; ++i) {
        pay_mid[i] = payout * std::exp(-rate * (static_cast<double>(i) + 0.5) * dt);
        pay_end[i] = payout * std::exp(-rate * static_cast<double>(i + 1) * dt);
    }

    struct PathState {
        double y;
        double survival = 1.0;
        double value = 0.0;
        bool done = false;
    };
    const auto advance = [&](PathState& p, std::size_t i, double z) {
        if (p.done) return;
        const double y1 = p.y + step_mean + step_vol * z;
        if (y1 <= 0.0) {
            p.value += p.survival * (bridge ? pay_mid[i] : pay_end[i]);
            p.done = true;
            return;
        }
        if (bridge) {
            const double expo = bridge_scale * p.y * y1;
            if (expo > -60.0) {
                const double hit = std::exp(expo);
                p.value += p.survival * hit * pay_mid[i];
                p.survival *= 1.0 - hit;
            }
        }
        p.y = y1;
    };

    const auto blocks = run_blocks(units, spec.workers, [&](std::size_t block, std::size_t, std::size_t count) {
        PhiloxStream rng(spec.seed, block);
        BlockSum s;
        for (std::size_t u = 0; u < count; ++u) {
            PathState up{y0}, down{y0};
            for (std::size_t i = 0; i < n; ++i) {
                const double z = rng.next_normal();
                advance(up, i, z);
                if (spec.antithetic) advance(down, i, -z);
                if (up.done && (down.done || !spec.antithetic)) break;
            }
            const double v = spec.antithetic ? 0.5 * (up.value + down.value) : up.value;
            s.sum += v;
            s.sum_sq += v * v;
        }
        return s;
    });
    return reduce(blocks, units, paths, 1.0);
}

} // namespace cyield::mc
