#include <algorithm>
#include <cmath>
#include <sstream>

#include "jdrisk/errors.hpp"
#include "jdrisk/idesolver/solvers.hpp"

namespace jdrisk {

namespace {

constexpr double kBoundSlack = 1e-8;

void check_bounds(const IDESolution& sol, double lo, double hi, const std::string& what) {
    const double slack = kBoundSlack * std::max({1.0, std::abs(lo), std::abs(hi)});
    for (double v : sol.solution.values()) {
        if (v < lo - slack || v > hi + slack) {
            std::ostringstream os;
            os << what << ": solution value " << v << " outside [" << lo << ", " << hi << "]";
            throw NumericError(os.str(), v);
        }
    }
}

double binomial(int n, int k) {
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c;
}

void require_dividend_inputs(const RiskParams& params, int k_max) {
    params.validate();
    JDRISK_REQUIRE(params.delta > 0, "dividend moments require delta > 0");
    JDRISK_REQUIRE(k_max >= 1, "dividend moments: k_max must be at least 1");
}

}  // namespace

EquationSpec gerber_equation(const RiskParams& params, const JumpLaw& claim_law, const JumpLaw& return_law,
                             const Penalty& penalty, GSVariant variant, double u_max, TailModel* tail_out) {
    EquationSpec spec;
    spec.params = params;
    if (params.lambda_P > 0) spec.claim_law = claim_law;
    if (params.lambda_R > 0) spec.return_law = return_law;
    spec.discount = params.delta;
    const double w00 = penalty(0.0, 0.0);
    if (params.sigma_P > 0) spec.left_value = variant == GSVariant::phi_s ? 0.0 : w00;
    if (variant != GSVariant::phi_d && params.lambda_P > 0) {
        const double lp = params.lambda_P;
        if (penalty.form() == Penalty::Form::one) {
            spec.source = [lp, claim_law](double u) { return lp * claim_law.partial_moments(u, INFINITY).first; };
        } else {
            std::vector<double> defs = penalty.deficit_breaks();
            spec.source = [lp, claim_law, penalty, defs](double u) {
                std::vector<double> breaks{u};
                for (double d : defs) breaks.push_back(u + d);
                return lp * claim_law.expectation(
                                [&](double z) { return z > u ? penalty(u, z - u) : 0.0; }, breaks);
            };
        }
    }
    const TailModel tail =
        make_tail_model(TailOperator::from(params, claim_law, return_law, params.delta), 0.0, u_max);
    spec.right = tail.far_field(u_max);
    static const char* names[] = {"phi", "phi_s", "phi_d"};
    spec.name = std::string("gerber-shiu ") + names[static_cast<int>(variant)];
    if (tail_out) *tail_out = tail;
    return spec;
}

IDESolution solve_gerber_ide(const RiskParams& params, const JumpLaw& claim_law, const JumpLaw& return_law,
                             const Penalty& penalty, GSVariant variant, const Grid& grid, const SolveOptions& opt) {
    params.validate();
    TailModel tail;
    const EquationSpec spec = gerber_equation(params, claim_law, return_law, penalty, variant, grid.u_max(), &tail);
    IDESolution sol = solve_equation(spec, grid, opt, tail);
    if (penalty.form() == Penalty::Form::one) check_bounds(sol, 0.0, 1.0, spec.name);
    else if (std::isfinite(penalty.bound())) check_bounds(sol, 0.0, penalty.bound(), spec.name);
    return sol;
}

MomentSolutions solve_threshold_moments(const RiskParams& params, const JumpLaw& claim_law,
                                        const JumpLaw& return_law, double b, double mu, int k_max,
                                        const Grid& grid, const SolveOptions& opt) {
    require_dividend_inputs(params, k_max);
    JDRISK_REQUIRE(b > 0 && mu > 0, "solve_threshold_moments: b and mu must be positive");
    const int ib = grid.nearest(b);
    JDRISK_REQUIRE(ib > 0 && ib < grid.n() - 1, "solve_threshold_moments: b must be interior to the grid");
    MomentSolutions out;
    out.b_used = grid.node(ib);
    out.snap_distance = std::abs(b - out.b_used);
    const double u_max = grid.u_max(), ratio = mu / params.delta;

    for (int k = 1; k <= k_max; ++k) {
        EquationSpec spec;
        spec.params = params;
        if (params.lambda_P > 0) spec.claim_law = claim_law;
        if (params.lambda_R > 0) spec.return_law = return_law;
        spec.discount = k * params.delta;
        spec.threshold = out.b_used;
        spec.mu = mu;
        if (params.sigma_P > 0) spec.left_value = 0.0;
        const double km = k * mu;
        std::vector<TailFamily> forcing;
        if (k == 1) {
            spec.source_above = [km](double) { return km; };
        } else {
            const IDESolution& prev = out.moments.back();
            GridFunction before = prev.solution;
            spec.source_above = [km, before](double u) { return km * before(u); };
            forcing = prev.tail.families(before.values().back(), u_max);
        }
        const TailModel tail = make_tail_model(TailOperator::from(params, claim_law, return_law, spec.discount, mu),
                                               std::pow(ratio, k), u_max, forcing, km);
        spec.right = tail.far_field(u_max);
        spec.name = "threshold moment V_" + std::to_string(k);
        IDESolution sol = solve_equation(spec, grid, opt, tail);
        check_bounds(sol, 0.0, std::pow(ratio, k), spec.name);
        out.moments.push_back(std::move(sol));
    }
    return out;
}

MomentSolutions solve_barrier_moments(const RiskParams& params, const JumpLaw& claim_law,
                                      const JumpLaw& return_law, double b, int k_max, const Grid& grid,
                                      const SolveOptions& opt) {
    require_dividend_inputs(params, k_max);
    JDRISK_REQUIRE(std::abs(grid.u_max() - b) <= 1e-12 * b, "solve_barrier_moments: grid must end exactly at b");
    MomentSolutions out;
    out.b_used = b;
    std::vector<double> at_b{1.0};  // V_0(b), V_1(b), ...

    for (int k = 1; k <= k_max; ++k) {
        EquationSpec spec;
        spec.params = params;
        if (params.lambda_P > 0) spec.claim_law = claim_law;
        if (params.lambda_R > 0) spec.return_law = return_law;
        spec.discount = k * params.delta;
        if (params.sigma_P > 0) spec.left_value = 0.0;

        FarField far;
        far.kind = FarField::Kind::derivative;
        far.asymptote = std::numeric_limits<double>::quiet_NaN();
        const std::vector<double> known = at_b;
        far.c0 = [known, k, b](double v) {
            double s = 0.0;
            for (int j = 0; j < k; ++j) s += binomial(k, j) * std::pow(v - b, k - j) * known[static_cast<std::size_t>(j)];
            return s;
        };
        far.c1 = [](double) { return 1.0; };
        far.d0 = k * known.back();
        far.d1 = 0.0;
        far.description = "payout of the excess above b";
        spec.right = far;
        spec.name = "barrier moment V_" + std::to_string(k);

        IDESolution sol = solve_equation(spec, grid, opt);
        check_bounds(sol, 0.0, std::numeric_limits<double>::infinity(), spec.name);
        at_b.push_back(sol.solution.values().back());
        out.moments.push_back(std::move(sol));
    }
    return out;
}

}  // namespace jdrisk
