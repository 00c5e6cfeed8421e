#include "jdrisk/simulate/path.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "jdrisk/errors.hpp"
#include "jdrisk/rng.hpp"

namespace jdrisk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Bridge crossing probabilities below exp(-kBridgeCut) are treated as zero.
constexpr double kBridgeCut = 40.0;

struct Walker {
    const RiskParams& m;
    const JumpLaw& claims;
    const JumpLaw& returns;
    const Strategy& strat;
    const SimConfig& cfg;
    RngStream& rng;
    PathOutcome out;
    double t = 0.0;
    double U = 0.0;

    void ruin(double when, RuinType type, double before, double deficit) {
        if (out.ruined) return;
        out.ruined = true;
        out.ruin_time = when;
        out.ruin_type = type;
        out.surplus_before = before;
        out.deficit = deficit;
    }

    bool alive() const { return !(out.ruined && cfg.absorb); }

    void pay_lump(double amount, double when) {
        if (amount > 0) out.discounted_dividends += amount * std::exp(-m.delta * when);
    }

    double step_size() const {
        const double lo = cfg.dt, hi = cfg.max_step();
        if (hi <= lo) return lo;
        double dist = std::abs(U);
        if (strat.kind != Strategy::Kind::none) dist = std::min(dist, std::abs(U - strat.b));
        const double s = diffusion_coefficient(U, m);
        if (s <= 0) return hi;
        const double d = dist / (cfg.adapt_k * s);
        return std::clamp(d * d, lo, hi);
    }

    [[noreturn]] void blow_up(const char* what) {
        std::ostringstream os;
        os << "simulate_path: non-finite surplus (" << what << ") at step " << out.steps << ", time " << t;
        throw NumericError(os.str());
    }

    // Advances the continuous part over [t, t + h].
    void diffuse(double h) {
        const bool above = strat.kind == Strategy::Kind::threshold && U > strat.b;
        const double c = m.p - (above ? strat.mu : 0.0);
        const double s = diffusion_coefficient(U, m);
        const double sq = std::sqrt(h);
        double Y;
        if (cfg.scheme == Scheme::euler) {
            Y = U + (c + m.r * U) * h + s * sq * rng.normal();
        } else {
            const double zp = rng.normal();
            const double zr = m.rho * zp + std::sqrt(std::max(0.0, 1.0 - m.rho * m.rho)) * rng.normal();
            const double growth = std::exp((m.r - 0.5 * m.sigma_R * m.sigma_R) * h + m.sigma_R * sq * zr);
            Y = growth * (U + (c - m.rho * m.sigma_P * m.sigma_R) * h + m.sigma_P * sq * zp);
        }
        if (!std::isfinite(Y)) blow_up("diffusion step");

        if (above && strat.mu > 0) {
            out.discounted_dividends += m.delta > 0
                ? strat.mu * (std::exp(-m.delta * t) - std::exp(-m.delta * (t + h))) / m.delta
                : strat.mu * h;
        }

        if (strat.kind == Strategy::Kind::barrier) {
            double excess;
            if (cfg.bridge_correction && s > 0) {
                // Maximum of the Brownian bridge from U to Y.
                const double gap = Y - U;
                const double top = 0.5 * (U + Y + std::sqrt(gap * gap - 2.0 * s * s * h * std::log(rng.uniform())));
                excess = std::max(0.0, top - strat.b);
            } else {
                excess = std::max(0.0, Y - strat.b);
            }
            Y -= excess;
            pay_lump(excess, t + 0.5 * h);
        }

        const double start = U;
        U = Y;
        if (out.ruined) return;
        if (Y <= 0) {
            ruin(t + h * start / (start - Y), RuinType::oscillation, 0.0, 0.0);
        } else if (cfg.bridge_correction && s > 0) {
            const double expo = 2.0 * start * Y / (s * s * h);
            if (expo < kBridgeCut && rng.uniform() < std::exp(-expo))
                ruin(t + 0.5 * h, RuinType::oscillation, 0.0, 0.0);
        }
    }

    void claim() {
        const double z = claims.sample(rng);
        const double before = U;
        U -= z;
        if (!std::isfinite(U)) blow_up("claim");
        if (!out.ruined) {
            if (U < 0) ruin(t, RuinType::claim, before, -U);
            else if (U == 0) ruin(t, RuinType::oscillation, 0.0, 0.0);
        }
    }

    void return_jump() {
        U *= 1.0 + returns.sample(rng);
        if (!std::isfinite(U)) blow_up("return jump");
        if (strat.kind == Strategy::Kind::barrier && U > strat.b) {
            pay_lump(U - strat.b, t);
            U = strat.b;
        }
    }
};

}  // namespace

void SimConfig::validate() const {
    JDRISK_REQUIRE(dt > 0 && std::isfinite(dt), "SimConfig: dt must be positive");
    JDRISK_REQUIRE(dt_max >= 0 && std::isfinite(dt_max), "SimConfig: dt_max must be finite and nonnegative");
    JDRISK_REQUIRE(adapt_k > 0, "SimConfig: adapt_k must be positive");
    JDRISK_REQUIRE(t_max > 0 && std::isfinite(t_max), "SimConfig: t_max must be positive");
    JDRISK_REQUIRE(n_paths >= 1, "SimConfig: n_paths must be at least 1");
}

PathOutcome simulate_path(const RiskParams& params, const JumpLaw& claim_law,
                          const JumpLaw& return_law, double u, const Strategy& strategy,
                          const SimConfig& config, RngStream& rng) {
    JDRISK_REQUIRE(u >= 0 && std::isfinite(u), "simulate_path: initial surplus must be finite and nonnegative");
    if (strategy.kind != Strategy::Kind::none)
        JDRISK_REQUIRE(strategy.b > 0, "simulate_path: dividend level b must be positive");
    if (strategy.kind == Strategy::Kind::threshold)
        JDRISK_REQUIRE(strategy.mu >= 0, "simulate_path: dividend rate must be nonnegative");

    Walker w{params, claim_law, return_law, strategy, config, rng, {}, 0.0, u};
    if (strategy.kind == Strategy::Kind::barrier && w.U > strategy.b) {
        w.pay_lump(w.U - strategy.b, 0.0);
        w.U = strategy.b;
    }
    if (w.U == 0 && (params.sigma_P > 0 || params.p <= 0)) w.ruin(0.0, RuinType::oscillation, 0.0, 0.0);

    double next_claim = params.lambda_P > 0 ? rng.exponential(params.lambda_P) : kInf;
    double next_return = params.lambda_R > 0 ? rng.exponential(params.lambda_R) : kInf;
    while (w.alive() && w.t < config.t_max) {
        const double target = std::min({w.t + w.step_size(), next_claim, next_return, config.t_max});
        const double h = target - w.t;
        if (h > 0) w.diffuse(h);
        w.t = target;
        ++w.out.steps;
        if (!w.alive()) break;
        if (target == next_claim) {
            w.claim();
            next_claim += rng.exponential(params.lambda_P);
        } else if (target == next_return) {
            w.return_jump();
            next_return += rng.exponential(params.lambda_R);
        }
    }

    PathOutcome& out = w.out;
    out.terminal_surplus = w.U;
    if (!out.ruined) {
        out.censored = true;
        out.ruin_time = config.t_max;
    }
    if (strategy.kind == Strategy::Kind::threshold && params.delta > 0)
        out.discounted_dividends = std::min(out.discounted_dividends, strategy.mu / params.delta);
    return out;
}

}  // namespace jdrisk
