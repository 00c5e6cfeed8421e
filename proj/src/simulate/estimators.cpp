#include "jdrisk/simulate/estimators.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "jdrisk/errors.hpp"
#include "jdrisk/rng.hpp"

namespace jdrisk {

namespace {

constexpr std::uint64_t kBlock = 1024;

void check_laws(const JumpLaw& claim_law, const JumpLaw& return_law) {
    JDRISK_REQUIRE(claim_law.role() == JumpRole::claim, "estimator: claim law must have role 'claim'");
    JDRISK_REQUIRE(return_law.role() == JumpRole::ret, "estimator: return law must have role 'return'");
}

DividendEstimate estimate_dividends(const RiskParams& params, const JumpLaw& claim_law,
                                    const JumpLaw& return_law, double u, const Strategy& strategy,
                                    const SimConfig& config, int k_max, std::span<const double> y_grid) {
    params.validate();
    config.validate();
    check_laws(claim_law, return_law);
    JDRISK_REQUIRE(params.delta > 0, "dividend estimators require delta > 0");
    JDRISK_REQUIRE(k_max >= 1, "dividend estimators: k_max must be at least 1");
    const std::size_t k = static_cast<std::size_t>(k_max);
    const std::size_t width = k + y_grid.size() + 1;
    std::vector<double> ys(y_grid.begin(), y_grid.end());

    auto stats = run_replicates(config.n_paths, width, config.workers, [&](std::uint64_t i, std::span<double> out) {
        RngStream rng(config.seed, i);
        const PathOutcome path = simulate_path(params, claim_law, return_law, u, strategy, config, rng);
        const double d = path.discounted_dividends;
        double power = 1.0;
        for (std::size_t j = 0; j < k; ++j) out[j] = power *= d;
        for (std::size_t j = 0; j < ys.size(); ++j) out[k + j] = std::exp(ys[j] * d);
        out[width - 1] = path.censored ? 1.0 : 0.0;
    });

    DividendEstimate est;
    for (std::size_t j = 0; j < k; ++j) est.moments.push_back(MCEstimate::from(stats[j]));
    for (std::size_t j = 0; j < ys.size(); ++j) est.mgf.push_back(MCEstimate::from(stats[k + j]));
    est.censored_fraction = stats[width - 1].mean();
    return est;
}

}  // namespace

void RunningStats::add(double x) noexcept {
    ++n_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
}

void RunningStats::merge(const RunningStats& o) noexcept {
    if (o.n_ == 0) return;
    if (n_ == 0) {
        *this = o;
        return;
    }
    const double na = static_cast<double>(n_), nb = static_cast<double>(o.n_);
    const double n = na + nb;
    const double d = o.mean_ - mean_;
    mean_ += d * nb / n;
    m2_ += o.m2_ + d * d * na * nb / n;
    n_ += o.n_;
}

double RunningStats::variance() const noexcept {
    return n_ < 2 ? 0.0 : std::max(0.0, m2_ / static_cast<double>(n_ - 1));
}

MCEstimate MCEstimate::from(const RunningStats& s) {
    MCEstimate e;
    e.n = s.count();
    e.std_err = e.n ? std::sqrt(s.variance() / static_cast<double>(e.n)) : 0.0;
    return e.with_mean(s.mean());
}

MCEstimate MCEstimate::with_mean(double m) const {
    MCEstimate e = *this;
    e.mean = m;
    e.ci95 = {m - 1.96 * std_err, m + 1.96 * std_err};
    return e;
}

std::vector<RunningStats> run_replicates(std::uint64_t n, std::size_t width, unsigned workers,
                                         const std::function<void(std::uint64_t, std::span<double>)>& fill) {
    const std::uint64_t n_blocks = (n + kBlock - 1) / kBlock;
    std::vector<std::vector<RunningStats>> blocks(n_blocks, std::vector<RunningStats>(width));
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto work = [&] {
        std::vector<double> row(width);
        for (;;) {
            const std::uint64_t blk = next.fetch_add(1);
            if (blk >= n_blocks) return;
            try {
                const std::uint64_t end = std::min(n, (blk + 1) * kBlock);
                for (std::uint64_t i = blk * kBlock; i < end; ++i) {
                    fill(i, row);
                    for (std::size_t j = 0; j < width; ++j) blocks[blk][j].add(row[j]);
                }
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(n_blocks);
                return;
            }
        }
    };

    unsigned threads = workers ? workers : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(n_blocks, 1)));
    if (threads <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<RunningStats> total(width);
    for (const auto& blk : blocks)
        for (std::size_t j = 0; j < width; ++j) total[j].merge(blk[j]);
    return total;
}

RuinBreakdown estimate_ruin(const RiskParams& params, const JumpLaw& claim_law, const JumpLaw& return_law,
                            double u, const SimConfig& config) {
    RiskParams m = params;
    m.delta = 0.0;
    const GerberShiuEstimate gs = estimate_gerber_shiu(m, claim_law, return_law, u, Penalty::one(), config);
    return {gs.phi, gs.phi_s, gs.phi_d, gs.censored_fraction};
}

GerberShiuEstimate estimate_gerber_shiu(const RiskParams& params, const JumpLaw& claim_law,
                                        const JumpLaw& return_law, double u, const Penalty& penalty,
                                        const SimConfig& config) {
    params.validate();
    config.validate();
    check_laws(claim_law, return_law);
    SimConfig cfg = config;
    cfg.absorb = true;
    const double w00 = penalty(0.0, 0.0);

    auto stats = run_replicates(cfg.n_paths, 4, cfg.workers, [&](std::uint64_t i, std::span<double> out) {
        RngStream rng(cfg.seed, i);
        const PathOutcome path = simulate_path(params, claim_law, return_law, u, Strategy::none(), cfg, rng);
        double s = 0.0, d = 0.0;
        if (path.ruined) {
            const double disc = params.delta > 0 ? std::exp(-params.delta * path.ruin_time) : 1.0;
            if (path.ruin_type == RuinType::claim) s = disc * penalty(path.surplus_before, path.deficit);
            else d = disc * w00;
        }
        out[0] = s + d;
        out[1] = s;
        out[2] = d;
        out[3] = path.censored ? 1.0 : 0.0;
    });

    GerberShiuEstimate est;
    est.phi_s = MCEstimate::from(stats[1]);
    est.phi_d = MCEstimate::from(stats[2]);
    est.phi = MCEstimate::from(stats[0]).with_mean(est.phi_s.mean + est.phi_d.mean);
    est.censored_fraction = stats[3].mean();
    return est;
}

DividendEstimate estimate_threshold_dividends(const RiskParams& params, const JumpLaw& claim_law,
                                              const JumpLaw& return_law, double u, double b, double mu,
                                              const SimConfig& config, int k_max, std::span<const double> y_grid) {
    JDRISK_REQUIRE(b > 0 && mu > 0, "estimate_threshold_dividends: b and mu must be positive");
    return estimate_dividends(params, claim_law, return_law, u, Strategy::threshold(b, mu), config, k_max, y_grid);
}

DividendEstimate estimate_barrier_dividends(const RiskParams& params, const JumpLaw& claim_law,
                                            const JumpLaw& return_law, double u, double b,
                                            const SimConfig& config, int k_max, std::span<const double> y_grid) {
    JDRISK_REQUIRE(b > 0, "estimate_barrier_dividends: b must be positive");
    return estimate_dividends(params, claim_law, return_law, u, Strategy::barrier(b), config, k_max, y_grid);
}

MCEstimate estimate_generator_quotient(const RiskParams& params, const JumpLaw& claim_law,
                                       const JumpLaw& return_law, const std::function<double(double)>& g,
                                       double u, double h, std::uint64_t n_paths, std::uint64_t seed,
                                       Scheme scheme, unsigned workers) {
    params.validate();
    check_laws(claim_law, return_law);
    JDRISK_REQUIRE(h > 0, "estimate_generator_quotient: h must be positive");
    SimConfig cfg;
    cfg.dt = h;
    cfg.t_max = h;
    cfg.n_paths = n_paths;
    cfg.seed = seed;
    cfg.scheme = scheme;
    cfg.bridge_correction = false;
    cfg.absorb = false;
    cfg.workers = workers;
    cfg.validate();
    const double gu = g(u);
    auto stats = run_replicates(n_paths, 1, workers, [&](std::uint64_t i, std::span<double> out) {
        RngStream rng(seed, i);
        const PathOutcome path = simulate_path(params, claim_law, return_law, u, Strategy::none(), cfg, rng);
        out[0] = (g(path.terminal_surplus) - gu) / h;
    });
    return MCEstimate::from(stats[0]);
}

}  // namespace jdrisk
