#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "jdrisk/model/jump_law.hpp"
#include "jdrisk/model/params.hpp"
#include "jdrisk/model/penalty.hpp"
#include "jdrisk/simulate/path.hpp"

namespace jdrisk {

/// Streaming mean and variance (Welford), mergeable (Chan et al.).
class RunningStats {
public:
    void add(double x) noexcept;
    void merge(const RunningStats& other) noexcept;
    std::uint64_t count() const noexcept { return n_; }
    double mean() const noexcept { return mean_; }
    /// Sample variance with the n - 1 denominator (0 for n < 2).
    double variance() const noexcept;

private:
    std::uint64_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

struct MCEstimate {
    double mean = 0.0;
    double std_err = 0.0;  ///< sample standard deviation / sqrt(n)
    std::uint64_t n = 0;
    std::pair<double, double> ci95{0.0, 0.0};

    static MCEstimate from(const RunningStats& s);
    /// Same spread, different point value (used where a mean is defined as a sum of parts).
    MCEstimate with_mean(double m) const;
};

/// Runs `n` replicates and reduces `width` statistics per replicate.
/// `fill(i, out)` writes replicate i's statistics; replicate i always draws
/// from RngStream(seed, i). Reduction proceeds over fixed-size blocks in
/// replicate order, so results do not depend on the worker count.
std::vector<RunningStats> run_replicates(std::uint64_t n, std::size_t width, unsigned workers,
                                         const std::function<void(std::uint64_t, std::span<double>)>& fill);

struct RuinBreakdown {
    MCEstimate psi;    ///< psi.mean is defined as psi_s.mean + psi_d.mean
    MCEstimate psi_s;  ///< ruin caused by a claim
    MCEstimate psi_d;  ///< ruin caused by oscillation
    double censored_fraction = 0.0;
};

struct GerberShiuEstimate {
    MCEstimate phi;  ///< phi.mean is defined as phi_s.mean + phi_d.mean
    MCEstimate phi_s;
    MCEstimate phi_d;
    double censored_fraction = 0.0;
};

struct DividendEstimate {
    std::vector<MCEstimate> moments;  ///< E[D^k], k = 1..k_max
    std::vector<MCEstimate> mgf;      ///< E[exp(y D)] per requested y
    double censored_fraction = 0.0;
};

/// Ruin probability split by cause. delta is ignored. Censored paths count as
/// surviving, so the estimate is a lower bound on the infinite-horizon value.
RuinBreakdown estimate_ruin(const RiskParams& params, const JumpLaw& claim_law, const JumpLaw& return_law,
                            double u, const SimConfig& config);

/// E[exp(-delta T) w(U_{T-}, |U_T|); T < inf] split by cause.
GerberShiuEstimate estimate_gerber_shiu(const RiskParams& params, const JumpLaw& claim_law,
                                        const JumpLaw& return_law, double u, const Penalty& penalty,
                                        const SimConfig& config);

/// Moments and MGF of the present value of dividends paid at rate mu above b. Requires delta > 0.
DividendEstimate estimate_threshold_dividends(const RiskParams& params, const JumpLaw& claim_law,
                                              const JumpLaw& return_law, double u, double b, double mu,
                                              const SimConfig& config, int k_max,
                                              std::span<const double> y_grid = {});

/// Same for the barrier strategy at level b. Requires delta > 0.
DividendEstimate estimate_barrier_dividends(const RiskParams& params, const JumpLaw& claim_law,
                                            const JumpLaw& return_law, double u, double b,
                                            const SimConfig& config, int k_max,
                                            std::span<const double> y_grid = {});

/// Short-time quotient (g(U_h) - g(u)) / h over unabsorbed paths simulated to
/// time h with a single step (plus jump epochs). Its mean tends to the
/// generator applied to g as h -> 0.
MCEstimate estimate_generator_quotient(const RiskParams& params, const JumpLaw& claim_law,
                                       const JumpLaw& return_law, const std::function<double(double)>& g,
                                       double u, double h, std::uint64_t n_paths, std::uint64_t seed,
                                       Scheme scheme = Scheme::euler, unsigned workers = 1);

}  // namespace jdrisk
