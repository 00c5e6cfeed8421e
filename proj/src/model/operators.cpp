#include "jdrisk/model/operators.hpp"

#include <cmath>
#include <sstream>

#include "jdrisk/errors.hpp"

namespace jdrisk {

TestFunction TestFunction::with_finite_differences(std::function<double(double)> f, double step) {
    TestFunction g;
    g.f = f;
    g.d1 = [f, step](double x) { return (f(x + step) - f(x - step)) / (2 * step); };
    g.d2 = [f, step](double x) { return (f(x + step) - 2 * f(x) + f(x - step)) / (step * step); };
    return g;
}

AssumptionsReport validate_model(const RiskParams& params, const JumpLaw& claim_law,
                                 const JumpLaw& return_law) {
    params.validate();
    JDRISK_REQUIRE(claim_law.role() == JumpRole::claim, "validate_model: claim law must have role 'claim'");
    JDRISK_REQUIRE(return_law.role() == JumpRole::ret, "validate_model: return law must have role 'return'");
    if (return_law.support_min() <= -1.0 && return_law.cdf(-1.0) > 0.0) {
        throw InvalidArgument("validate_model: return law " + return_law.describe() +
                              " puts mass at or below -1; the surplus multiplier 1 + S_R must stay positive");
    }
    if (return_law.family() != JumpLaw::Family::shifted_lognormal && return_law.support_min() <= -1.0) {
        throw InvalidArgument("validate_model: return law " + return_law.describe() +
                              " has support reaching -1 or below");
    }

    AssumptionsReport rep;
    const double loading = params.p - params.rho * params.sigma_P * params.sigma_R -
                           params.lambda_P * claim_law.mean();
    rep.net_profit = loading > 0;
    rep.sigmaP_positive = params.sigma_P > 0;
    rep.FR_support_ok = true;
    rep.drift_dominance = params.r - 0.5 * params.sigma_R * params.sigma_R > 0;

    std::ostringstream os;
    os.precision(6);
    os << "net profit margin p - rho sigma_P sigma_R - lambda_P E[S_P] = " << loading
       << (rep.net_profit ? " > 0" : " <= 0 (violated)");
    rep.messages.push_back(os.str());
    rep.messages.push_back(rep.sigmaP_positive ? "sigma_P > 0: oscillation ruin at u = 0"
                                               : "sigma_P = 0: no oscillation ruin; boundary data at u = 0 not imposed");
    rep.messages.push_back("return law support inside (-1, inf)");
    os.str("");
    os << "r - sigma_R^2/2 = " << params.r - 0.5 * params.sigma_R * params.sigma_R
       << (rep.drift_dominance ? " > 0" : " <= 0 (violated: surplus need not drift to +inf)");
    rep.messages.push_back(os.str());
    return rep;
}

double apply_generator(const TestFunction& g, double u, const RiskParams& m,
                       const JumpLaw& claim_law, const JumpLaw& return_law) {
    const double gu = g.f(u);
    double value = m.half_variance(u) * g.d2(u) + m.drift(u) * g.d1(u);
    if (m.lambda_P > 0)
        value += m.lambda_P * claim_law.expectation([&](double z) { return g.f(u - z) - gu; });
    if (m.lambda_R > 0)
        value += m.lambda_R * return_law.expectation([&](double z) { return g.f(u + u * z) - gu; });
    return value;
}

double apply_G(const TestFunction& h, double u, const RiskParams& m,
               const JumpLaw& claim_law, const JumpLaw& return_law) {
    double value = m.half_variance(u) * h.d2(u) + m.drift(u) * h.d1(u);
    if (m.lambda_P > 0) {
        const double cut[] = {u};
        value += m.lambda_P * claim_law.expectation(
                                  [&](double z) { return z <= u ? h.f(u - z) : 0.0; }, cut);
    }
    if (m.lambda_R > 0)
        value += m.lambda_R * return_law.expectation([&](double z) { return h.f(u + u * z); });
    return value;
}

}  // namespace jdrisk
