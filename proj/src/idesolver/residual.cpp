#include <algorithm>
#include <cmath>

#include "internal.hpp"
#include "jdrisk/errors.hpp"
#include "jdrisk/idesolver/solvers.hpp"

namespace jdrisk {

namespace {

// Left side of the canonical equation at u given h, h', h'' there and the
// function itself for the jump integrals. `node_breaks` are the points where
// h is not smooth, used as quadrature breakpoints.
double lhs(const EquationSpec& spec, double u, double h0, double h1, double h2,
           const std::function<double(double)>& h, const std::vector<double>& node_breaks) {
    const RiskParams& m = spec.params;
    double v = spec.a(u) * h2 + spec.b(u) * h1 - spec.q() * h0 + spec.s(u);
    if (m.lambda_P > 0) {
        const JumpLaw& law = *spec.claim_law;
        const auto [zlo, zhi] = law.effective_support();
        std::vector<double> breaks{u};
        for (double x : node_breaks) {
            const double z = u - x;
            if (z > zlo && z < zhi) breaks.push_back(z);
        }
        v += m.lambda_P * law.expectation([&](double z) { return z <= u ? h(u - z) : 0.0; }, breaks);
    }
    if (m.lambda_R > 0 && u > 0) {
        const JumpLaw& law = *spec.return_law;
        const auto [zlo, zhi] = law.effective_support();
        std::vector<double> breaks;
        for (double x : node_breaks) {
            const double z = x / u - 1.0;
            if (z > zlo && z < zhi) breaks.push_back(z);
        }
        v += m.lambda_R * law.expectation([&](double z) { return h(u * (1.0 + z)); }, breaks);
    } else if (m.lambda_R > 0) {
        v += m.lambda_R * h0;
    }
    return v;
}

}  // namespace

double residual(const GridFunction& g, const EquationSpec& spec, std::span<const double> probes) {
    const double H = g.grid().h();
    double worst = 0.0;
    for (double u : probes) {
        JDRISK_REQUIRE(u - H >= 0, "residual: probe too close to 0 for central differences");
        const double lo = g(u - H), mid = g(u), hi = g(u + H);
        const double d1 = (hi - lo) / (2 * H), d2 = (hi - 2 * mid + lo) / (H * H);
        double v = spec.a(u) * d2 + spec.b(u) * d1 - spec.q() * mid + spec.s(u);
        if (spec.has_jumps()) v += detail::jump_row(spec, g.grid(), u).apply(g.values());
        worst = std::max(worst, std::abs(v));
    }
    return worst;
}

double residual(const std::function<Jet(double)>& candidate, const EquationSpec& spec,
                std::span<const double> probes) {
    auto f = [&](double x) { return candidate(x).value; };
    double worst = 0.0;
    for (double u : probes) {
        const Jet j = candidate(u);
        worst = std::max(worst, std::abs(lhs(spec, u, j.value, j.d1, j.d2, f, {})));
    }
    return worst;
}

}  // namespace jdrisk
