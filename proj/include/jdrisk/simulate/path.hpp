#pragma once

#include <cstdint>

#include "jdrisk/model/jump_law.hpp"
#include "jdrisk/model/params.hpp"

namespace jdrisk {

class RngStream;

enum class Scheme {
    euler,        ///< Euler-Maruyama on the one-factor SDE with volatility diffusion_coefficient(U)
    exponential,  ///< stochastic-exponential solution advanced with left-point integrals
};

struct SimConfig {
    double dt = 1e-3;      ///< step size; the smallest step when adaptive stepping is on
    double dt_max = 0.0;   ///< largest step; 0 or <= dt means fixed steps of dt
    double adapt_k = 10.0;  ///< adaptive steps keep k local standard deviations to the nearest boundary
    double t_max = 100.0;  ///< horizon; paths alive at t_max are censored
    std::uint64_t n_paths = 10000;
    std::uint64_t seed = 1;
    bool bridge_correction = true;
    Scheme scheme = Scheme::euler;
    unsigned workers = 1;  ///< 0 uses all hardware threads
    bool absorb = true;    ///< stop at ruin; when false the path runs to t_max and ruin is only recorded

    void validate() const;
    double max_step() const noexcept { return dt_max > dt ? dt_max : dt; }
};

struct Strategy {
    enum class Kind { none, threshold, barrier };
    Kind kind = Kind::none;
    double b = 0.0;
    double mu = 0.0;

    static Strategy none() { return {}; }
    /// Dividends at rate mu while the surplus exceeds b.
    static Strategy threshold(double b, double mu) { return {Kind::threshold, b, mu}; }
    /// Everything above b is paid out at once.
    static Strategy barrier(double b) { return {Kind::barrier, b, 0.0}; }
};

enum class RuinType { none, claim, oscillation };

struct PathOutcome {
    bool ruined = false;
    bool censored = false;     ///< alive at t_max
    double ruin_time = 0.0;    ///< t_max when not ruined
    RuinType ruin_type = RuinType::none;
    double surplus_before = 0.0;  ///< U at T-, zero for oscillation ruin
    double deficit = 0.0;         ///< |U_T|
    double discounted_dividends = 0.0;
    double terminal_surplus = 0.0;  ///< U at the end of the path (at ruin when absorbed, else at t_max)
    std::uint64_t steps = 0;
};

/// Simulates one path from initial surplus u.
///
/// Jump epochs of both Poisson processes are sampled exactly and diffusion
/// steps stop at them. Ruin is the first time U <= 0: a claim that makes U
/// strictly negative is claim ruin, anything else (a diffusion crossing, or a
/// claim landing exactly on 0) is oscillation ruin with zero deficit.
/// Throws NumericError when the state becomes non-finite.
PathOutcome simulate_path(const RiskParams& params, const JumpLaw& claim_law,
                          const JumpLaw& return_law, double u, const Strategy& strategy,
                          const SimConfig& config, RngStream& rng);

}  // namespace jdrisk
