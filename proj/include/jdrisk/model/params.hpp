#pragma once

#include <cmath>

namespace jdrisk {

/// Scalar parameters of the jump-diffusion surplus model
///
///   dU = dP + U dR,
///   P_t = p t + sigma_P W_P - sum of claims,   R_t = r t + sigma_R W_R + sum of return jumps,
///
/// with corr(W_P, W_R) = rho and discount force delta for present values.
struct RiskParams {
    double p = 1.0;         ///< premium rate
    double sigma_P = 0.0;   ///< surplus volatility
    double lambda_P = 0.0;  ///< claim intensity
    double r = 0.0;         ///< investment drift
    double sigma_R = 0.0;   ///< return volatility
    double lambda_R = 0.0;  ///< return-jump intensity
    double rho = 0.0;       ///< Brownian correlation
    double delta = 0.0;     ///< discount force

    /// Throws InvalidArgument unless rho is in [-1, 1] and volatilities,
    /// intensities and delta are nonnegative and finite.
    void validate() const;

    /// Half the squared local volatility, the second-order coefficient of the
    /// generator: (sigma_P^2 + 2 rho sigma_P sigma_R u + sigma_R^2 u^2) / 2.
    double half_variance(double u) const noexcept {
        return 0.5 * (sigma_P * sigma_P + 2.0 * rho * sigma_P * sigma_R * u +
                      sigma_R * sigma_R * u * u);
    }

    /// Drift p + r u of the uncontrolled surplus.
    double drift(double u) const noexcept { return p + r * u; }
};

/// Local volatility of the one-factor representation of the surplus,
/// sqrt((sigma_P + rho sigma_R u)^2 + sigma_R^2 (1 - rho^2) u^2).
inline double diffusion_coefficient(double u, const RiskParams& m) noexcept {
    const double a = m.sigma_P + m.rho * m.sigma_R * u;
    const double b = m.sigma_R * u;
    return std::sqrt(a * a + b * b * (1.0 - m.rho * m.rho));
}

}  // namespace jdrisk
