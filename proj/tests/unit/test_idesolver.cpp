#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "fixtures.hpp"
#include "jdrisk/errors.hpp"
#include "jdrisk/idesolver/solvers.hpp"
#include "jdrisk/simulate/estimators.hpp"
#include "jdrisk/specialfn/closed_forms.hpp"
#include "oracles.hpp"

using namespace jdrisk;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kPi = std::numbers::pi;

// a h'' + b h' - q h + s = 0 with a = 1/2, b = 1, q = 1 and exact solution cos u on [0, pi].
EquationSpec manufactured() {
    EquationSpec s;
    s.params.p = 1.0;
    s.params.sigma_P = 1.0;
    s.discount = 1.0;
    s.source = [](double u) { return 1.5 * std::cos(u) + std::sin(u); };
    s.left_value = 1.0;
    s.right = FarField::constant(-1.0);
    s.name = "manufactured";
    return s;
}

double sup_error(const GridFunction& f, const std::function<double(double)>& exact) {
    double e = 0.0;
    for (double u : f.grid().nodes()) e = std::max(e, std::abs(f(u) - exact(u)));
    return e;
}

// Sup-norm difference at the nodes of the coarser grid.
double sup_gap(const GridFunction& coarse, const GridFunction& fine) {
    double e = 0.0;
    for (double u : coarse.grid().nodes()) e = std::max(e, std::abs(coarse(u) - fine(u)));
    return e;
}

SimConfig mc(std::uint64_t n, double t_max) {
    SimConfig c;
    c.dt = 1e-3;
    c.dt_max = 0.1;
    c.t_max = t_max;
    c.n_paths = n;
    c.seed = 11;
    c.scheme = Scheme::exponential;
    return c;
}

bool within(const MCEstimate& e, double target) { return std::abs(e.mean - target) <= 3.0 * e.std_err; }

}  // namespace

TEST_CASE("grid and grid function", "[grid]") {
    const Grid g(2.0, 5);
    CHECK(g.h() == 0.5);
    CHECK(g.node(0) == 0.0);
    CHECK(g.node(4) == 2.0);
    CHECK(g.nearest(1.2) == 2);
    CHECK(g.nearest(-3.0) == 0);
    CHECK_THROWS_AS(Grid(2.0, 2), InvalidArgument);
    CHECK_THROWS_AS(Grid(-1.0, 5), InvalidArgument);

    const GridFunction f(g, {0.0, 1.0, 2.0, 3.0, 4.0}, FarField::constant(7.0));
    CHECK_THAT(f(0.75), WithinRel(1.5, 1e-15));
    CHECK(f(2.0) == 4.0);
    CHECK(f(10.0) == 7.0);
    CHECK(f.asymptote() == 7.0);
    CHECK_THROWS_AS(f(-0.1), InvalidArgument);
}

TEST_CASE("manufactured solution converges at second order", "[bvp]") {
    const EquationSpec spec = manufactured();
    const auto exact = [](double u) { return std::cos(u); };
    std::vector<double> errors;
    for (int n : {51, 101, 201, 401}) errors.push_back(sup_error(solve_linear_bvp(spec, Grid(kPi, n)), exact));
    for (std::size_t i = 1; i < errors.size(); ++i) {
        const double ratio = errors[i - 1] / errors[i];
        CHECK(ratio > 3.5);
        CHECK(ratio < 4.5);
    }
    std::vector<double> probes;
    for (int i = 1; i < 200; ++i) probes.push_back(kPi * i / 200);
    const double r = residual([](double u) { return Jet{std::cos(u), -std::sin(u), -std::cos(u)}; }, spec, probes);
    CHECK(r < 1e-8);
}

TEST_CASE("homogeneous problem has the zero solution", "[bvp]") {
    EquationSpec s;
    s.params = fixture::discounted(0.3);
    s.discount = 0.1;
    s.left_value = 0.0;
    s.right = FarField::constant(0.0);
    const GridFunction f = solve_linear_bvp(s, Grid(10.0, 201));
    for (double v : f.values()) CHECK(v == 0.0);
}

TEST_CASE("linear BVP refuses jump terms", "[bvp]") {
    const EquationSpec s = gerber_equation(fixture::jumps(0.5), fixture::claims(), fixture::returns(), Penalty::one(),
                                           GSVariant::phi, 50.0);
    CHECK_THROWS_AS(solve_linear_bvp(s, Grid(50.0, 101)), InvalidArgument);
}

TEST_CASE("rho = 1 ruin BVP matches the closed form", "[bvp][oracle]") {
    const RiskParams m = fixture::diffusion(1.0);
    const EquationSpec s = gerber_equation(m, fixture::claims(), fixture::returns(), Penalty::one(), GSVariant::phi, 20.0);
    const GridFunction f = solve_linear_bvp(s, Grid(20.0, 2000));
    CHECK(sup_error(f, [&](double u) { return closed_ruin_rho1(u, m); }) < 1e-3);
}

TEST_CASE("discounted ruin BVP matches the closed form", "[bvp][oracle]") {
    const RiskParams m = fixture::discounted(0.3);
    const GerberNoJumps g(m);
    const Grid grid(50.0, 2001);
    for (GSVariant v : {GSVariant::phi, GSVariant::phi_d}) {
        const IDESolution sol = solve_gerber_ide(m, fixture::claims(), fixture::returns(), Penalty::one(), v, grid);
        CHECK(sup_error(sol.solution, g) < 1e-3);
        CHECK(sol.solution(0.0) == 1.0);
    }
    const IDESolution s = solve_gerber_ide(m, fixture::claims(), fixture::returns(), Penalty::one(), GSVariant::phi_s, grid);
    for (double v : s.solution.values()) CHECK(v == 0.0);
}

TEST_CASE("rho = 0 ruin BVP converges at second order", "[bvp]") {
    const RiskParams m = fixture::diffusion(0.0);
    std::vector<GridFunction> sols;
    for (int n : {251, 501, 1001, 2001})
        sols.push_back(solve_gerber_ide(m, fixture::claims(), fixture::returns(), Penalty::one(), GSVariant::phi,
                                        Grid(20.0, n))
                           .solution);
    for (std::size_t i = 2; i < sols.size(); ++i) {
        const double ratio = sup_gap(sols[i - 2], sols[i - 1]) / sup_gap(sols[i - 1], sols[i]);
        CHECK(ratio > 3.5);
        CHECK(ratio < 4.5);
    }
}

TEST_CASE("ruin with jumps: structure and self-consistency", "[ide]") {
    const RiskParams m = fixture::jumps(0.5);
    const Grid grid(50.0, 2001);
    SolveOptions direct;
    direct.method = IdeMethod::direct;
    const IDESolution fp = solve_gerber_ide(m, fixture::claims(), fixture::returns(), Penalty::one(), GSVariant::phi, grid);
    const IDESolution dl =
        solve_gerber_ide(m, fixture::claims(), fixture::returns(), Penalty::one(), GSVariant::phi, grid, direct);
    double gap = 0.0;
    for (std::size_t i = 0; i < fp.solution.values().size(); ++i)
        gap = std::max(gap, std::abs(fp.solution.values()[i] - dl.solution.values()[i]));
    CHECK(gap < 1e-6);
    CHECK(fp.solution(0.0) == 1.0);
    for (double v : fp.solution.values()) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }

    const IDESolution s = solve_gerber_ide(m, fixture::claims(), fixture::returns(), Penalty::one(), GSVariant::phi_s, grid);
    const IDESolution d = solve_gerber_ide(m, fixture::claims(), fixture::returns(), Penalty::one(), GSVariant::phi_d, grid);
    CHECK(s.solution(0.0) == 0.0);
    CHECK(d.solution(0.0) == 1.0);
    for (double u : {0.5, 1.0, 4.0})
        CHECK_THAT(s.solution(u) + d.solution(u), WithinAbs(fp.solution(u), 1e-6));

    // Same probes as the solver.
    const EquationSpec spec = gerber_equation(m, fixture::claims(), fixture::returns(), Penalty::one(), GSVariant::phi, 50.0);
    const int N = grid.n() - 1, stride = std::max(1, (N - 1) / 200);
    std::vector<double> probes;
    for (int i = 1; i < N; i += stride) probes.push_back(grid.node(i));
    CHECK(residual(fp.solution, spec, probes) <= fp.residual * (1 + 1e-9) + 1e-14);
}

TEST_CASE("ruin with jumps matches simulation", "[ide][mc]") {
    const RiskParams m = fixture::jumps(0.5);
    const IDESolution sol =
        solve_gerber_ide(m, fixture::claims(), fixture::returns(), Penalty::one(), GSVariant::phi, Grid(50.0, 2001));
    const RuinBreakdown r = estimate_ruin(m, fixture::claims(), fixture::returns(), 1.0, mc(20000, 200.0));
    CHECK(within(r.psi, sol.solution(1.0)));
}

TEST_CASE("threshold moments without jumps", "[threshold]") {
    const RiskParams m = fixture::discounted(0.0);
    const double b = 2.0, mu = 0.5, cap = mu / m.delta;
    const Grid grid(50.0, 8001);
    const MomentSolutions ms = solve_threshold_moments(m, fixture::claims(), fixture::returns(), b, mu, 3, grid);
    CHECK(ms.snap_distance == 0.0);
    CHECK(ms.b_used == b);
    const ThresholdClosedForm f(m, b, mu);
    CHECK(sup_error(ms.moments[0].solution, f) < 1e-3);
    for (int k = 1; k <= 3; ++k)
        for (double v : ms.moments[static_cast<std::size_t>(k - 1)].solution.values()) {
            // Bounds hold up to the solver's 1e-8 relative slack.
            const double slack = 1e-8 * std::pow(cap, k);
            CHECK(v >= -slack);
            CHECK(v <= std::pow(cap, k) + slack);
        }

    // Second-order one-sided slopes on each side of b.
    const auto& v = ms.moments[0].solution.values();
    const int ib = grid.nearest(b);
    const double h = grid.h();
    const double left = (3 * v[ib] - 4 * v[ib - 1] + v[ib - 2]) / (2 * h);
    const double right = (-3 * v[ib] + 4 * v[ib + 1] - v[ib + 2]) / (2 * h);
    CHECK(std::abs(left - right) < 1e-4);
}

TEST_CASE("threshold snapping is reported", "[threshold]") {
    const MomentSolutions ms =
        solve_threshold_moments(fixture::discounted(0.0), fixture::claims(), fixture::returns(), 2.01, 0.5, 1,
                                Grid(50.0, 2001));
    CHECK(ms.b_used == 2.0);
    CHECK_THAT(ms.snap_distance, WithinAbs(0.01, 1e-12));
    CHECK_THROWS_AS(solve_threshold_moments(fixture::discounted(0.0), fixture::claims(), fixture::returns(), 60.0,
                                            0.5, 1, Grid(50.0, 2001)),
                    InvalidArgument);
    RiskParams undiscounted = fixture::discounted(0.0);
    undiscounted.delta = 0.0;
    CHECK_THROWS_AS(solve_threshold_moments(undiscounted, fixture::claims(), fixture::returns(), 2.0, 0.5, 1,
                                            Grid(50.0, 2001)),
                    InvalidArgument);
}

TEST_CASE("threshold moments without surplus volatility match simulation", "[threshold][mc]") {
    RiskParams m = fixture::discounted(0.0);
    m.sigma_P = 0.0;
    const MomentSolutions ms = solve_threshold_moments(m, fixture::claims(), fixture::returns(), 2.0, 0.5, 1, Grid(50.0, 2001));
    for (double u : {0.0, 1.0, 4.0}) {
        // No ruin is possible, so every path runs to the horizon.
        const DividendEstimate d =
            estimate_threshold_dividends(m, fixture::claims(), fixture::returns(), u, 2.0, 0.5, mc(4000, 100.0), 1);
        CHECK(within(d.moments[0], ms.moments[0].solution(u)));
    }
}

TEST_CASE("threshold moments with claims match simulation", "[threshold][mc]") {
    RiskParams m = fixture::jumps(0.0);
    m.delta = 0.1;
    const MomentSolutions ms = solve_threshold_moments(m, fixture::claims(), fixture::returns(), 2.0, 0.5, 2, Grid(50.0, 2001));
    for (double u : {0.5, 2.0, 4.0}) {
        const DividendEstimate d =
            estimate_threshold_dividends(m, fixture::claims(), fixture::returns(), u, 2.0, 0.5, mc(10000, 150.0), 2);
        CHECK(within(d.moments[0], ms.moments[0].solution(u)));
        CHECK(within(d.moments[1], ms.moments[1].solution(u)));
    }
}

TEST_CASE("barrier moments", "[barrier]") {
    const RiskParams m = fixture::discounted(0.0);
    const double b = 1.0;
    const Grid grid(b, 1001);
    const MomentSolutions ms = solve_barrier_moments(m, fixture::claims(), fixture::returns(), b, 2, grid);
    const BarrierClosedForm f(m, b);
    CHECK(sup_error(ms.moments[0].solution, f) < 1e-3);
    CHECK(ms.moments[0].solution(0.0) == 0.0);
    const auto& v = ms.moments[0].solution.values();
    const int N = grid.n() - 1;
    const double slope = (3 * v[N] - 4 * v[N - 1] + v[N - 2]) / (2 * grid.h());
    CHECK_THAT(slope, WithinAbs(1.0, 1e-4));
    for (std::size_t i = 0; i < v.size(); ++i)
        CHECK(ms.moments[1].solution.values()[i] >= v[i] * v[i] - 1e-12);
    CHECK_THROWS_AS(solve_barrier_moments(m, fixture::claims(), fixture::returns(), b, 1, Grid(2.0, 101)), InvalidArgument);
}

TEST_CASE("barrier moments with claims match simulation", "[barrier][mc]") {
    RiskParams m = fixture::jumps(0.0);
    m.delta = 0.1;
    const double b = 1.0;
    const MomentSolutions ms = solve_barrier_moments(m, fixture::claims(), fixture::returns(), b, 1, Grid(b, 1001));
    for (double u : {0.5, 1.0}) {
        const DividendEstimate d = estimate_barrier_dividends(m, fixture::claims(), fixture::returns(), u, b, mc(10000, 150.0), 1);
        CHECK(within(d.moments[0], ms.moments[0].solution(u)));
    }
}
