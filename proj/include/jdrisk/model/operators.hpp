#pragma once

#include <functional>
#include <string>
#include <vector>

#include "jdrisk/model/jump_law.hpp"
#include "jdrisk/model/params.hpp"

namespace jdrisk {

/// A smooth function together with its first two derivatives.
struct TestFunction {
    std::function<double(double)> f;
    std::function<double(double)> d1;
    std::function<double(double)> d2;

    /// Derivatives by central differences with the given step.
    static TestFunction with_finite_differences(std::function<double(double)> f, double step = 1e-4);
};

/// Which of the standing hypotheses for the closed forms and the drift to
/// +infinity hold for a model. Violations are reported, not rejected.
struct AssumptionsReport {
    bool net_profit = false;        ///< p - rho sigma_P sigma_R - lambda_P E[S_P] > 0
    bool sigmaP_positive = false;   ///< sigma_P > 0
    bool FR_support_ok = false;     ///< F_R(-1) = 0
    bool drift_dominance = false;   ///< r - sigma_R^2 / 2 > 0
    std::vector<std::string> messages;

    bool all_hold() const noexcept { return net_profit && sigmaP_positive && FR_support_ok && drift_dominance; }
};

/// Checks parameters and laws. Throws InvalidArgument when the return law
/// puts mass at or below -1 or the laws carry the wrong roles.
AssumptionsReport validate_model(const RiskParams& params, const JumpLaw& claim_law,
                                 const JumpLaw& return_law);

/// Infinitesimal generator of the uncontrolled surplus applied to g at u:
///   a(u) g'' + (p + r u) g' + lambda_P E[g(u - S_P) - g(u)] + lambda_R E[g(u + u S_R) - g(u)].
double apply_generator(const TestFunction& g, double u, const RiskParams& params,
                       const JumpLaw& claim_law, const JumpLaw& return_law);

/// The operator of the Gerber-Shiu equations applied to h at u:
///   a(u) h'' + (p + r u) h' + lambda_P int_{z <= u} h(u - z) dF_P + lambda_R E[h(u + u S_R)].
/// Claims that would push the surplus below zero are excluded.
double apply_G(const TestFunction& h, double u, const RiskParams& params,
               const JumpLaw& claim_law, const JumpLaw& return_law);

}  // namespace jdrisk
