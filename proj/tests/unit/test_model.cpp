#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "fixtures.hpp"
#include "jdrisk/errors.hpp"
#include "jdrisk/model/operators.hpp"
#include "jdrisk/model/penalty.hpp"
#include "jdrisk/rng.hpp"

using namespace jdrisk;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

TestFunction exp_minus() {
    return {[](double y) { return std::exp(-y); }, [](double y) { return -std::exp(-y); },
            [](double y) { return std::exp(-y); }};
}

// Kolmogorov-Smirnov statistic of n draws against the law's cdf.
double ks_statistic(const JumpLaw& law, int n, std::uint64_t seed) {
    RngStream rng(seed, 0);
    std::vector<double> x(static_cast<std::size_t>(n));
    for (double& v : x) v = law.sample(rng);
    std::sort(x.begin(), x.end());
    double d = 0.0;
    for (int i = 0; i < n; ++i) {
        const double F = law.cdf(x[static_cast<std::size_t>(i)]);
        d = std::max({d, std::abs(F - double(i) / n), std::abs(F - double(i + 1) / n)});
    }
    return d;
}

}  // namespace

TEST_CASE("RiskParams validation", "[params]") {
    RiskParams m = fixture::diffusion(0.0);
    CHECK_NOTHROW(m.validate());
    m.rho = 1.5;
    CHECK_THROWS_AS(m.validate(), InvalidArgument);
    m = fixture::diffusion(0.0);
    m.sigma_P = -1;
    CHECK_THROWS_AS(m.validate(), InvalidArgument);
    m = fixture::diffusion(0.0);
    m.lambda_R = -0.1;
    CHECK_THROWS_AS(m.validate(), InvalidArgument);
    m = fixture::diffusion(0.0);
    m.delta = NAN;
    CHECK_THROWS_AS(m.validate(), InvalidArgument);
}

TEST_CASE("diffusion coefficient", "[operators]") {
    RiskParams m;
    m.sigma_P = 1.0;
    m.sigma_R = 1.0;
    CHECK(diffusion_coefficient(0.0, m) == 1.0);
    CHECK_THAT(diffusion_coefficient(1.0, m), WithinRel(std::sqrt(2.0), 1e-15));
    m.sigma_R = 0.5;
    m.rho = 1.0;
    CHECK_THAT(diffusion_coefficient(2.0, m), WithinRel(2.0, 1e-15));

    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> U(0, 1);
    for (int i = 0; i < 1000; ++i) {
        RiskParams q;
        q.sigma_P = 2 * U(gen);
        q.sigma_R = 2 * U(gen);
        q.rho = 2 * U(gen) - 1;
        const double u = 10 * U(gen);
        const double c = diffusion_coefficient(u, q);
        CHECK_THAT(c * c, WithinAbs(2.0 * q.half_variance(u), 1e-12 * (1 + c * c)));
        q.rho = U(gen) < 0.5 ? -1.0 : 1.0;
        CHECK_THAT(diffusion_coefficient(u, q), WithinAbs(std::abs(q.sigma_P + q.rho * q.sigma_R * u), 1e-12));
    }
}

TEST_CASE("exponential families", "[jump_law]") {
    const JumpLaw e = JumpLaw::exponential(0.5);
    CHECK_THAT(e.mean(), WithinRel(0.5, 1e-14));
    CHECK_THAT(e.moment(2), WithinRel(0.5, 1e-14));
    CHECK_THAT(e.moment(3), WithinRel(6 * 0.125, 1e-14));
    CHECK_THAT(e.cdf(1.0), WithinRel(1 - std::exp(-2.0), 1e-14));
    CHECK_THAT(*e.mgf(1.0), WithinRel(2.0, 1e-14));
    CHECK_FALSE(e.mgf(2.5).has_value());

    const JumpLaw m = JumpLaw::mixed_exponential({{0.7, 1.0, +1}, {0.3, 0.5, -1}});
    CHECK_THAT(m.mean(), WithinRel(0.7 - 0.15, 1e-14));
    CHECK_THAT(m.cdf(0.0), WithinRel(0.3, 1e-14));
    CHECK(m.support_min() == -INFINITY);
    CHECK_THROWS_AS(JumpLaw::exponential(-1), InvalidArgument);
}

TEST_CASE("normal, lognormal, point mass and empirical laws", "[jump_law]") {
    const JumpLaw n = JumpLaw::normal(1.0, 2.0);
    CHECK_THAT(n.cdf(1.0), WithinAbs(0.5, 1e-15));
    CHECK_THAT(n.moment(2), WithinRel(5.0, 1e-12));

    const JumpLaw l = JumpLaw::shifted_lognormal(0.1, 0.2);
    CHECK_THAT(l.mean(), WithinRel(std::exp(0.1 + 0.02) - 1, 1e-12));
    CHECK_THAT(l.power_moment(1.5), WithinRel(std::exp(-0.15 + 0.5 * 2.25 * 0.04), 1e-14));
    CHECK(l.support_min() == -1.0);

    const JumpLaw p = JumpLaw::point_mass(0.5);
    CHECK(p.cdf(0.49) == 0.0);
    CHECK(p.cdf(0.5) == 1.0);
    CHECK(p.mean() == 0.5);

    const JumpLaw emp = JumpLaw::empirical({1.0, 2.0, 4.0}, {1.0, 1.0, 2.0});
    CHECK_THAT(emp.mean(), WithinRel(0.25 + 0.5 + 2.0, 1e-15));
    CHECK_THAT(emp.cdf(2.0), WithinRel(0.5, 1e-15));
}

TEST_CASE("partial moments agree with quadrature", "[jump_law]") {
    const std::vector<JumpLaw> laws = {JumpLaw::exponential(0.5), JumpLaw::mixed_exponential({{0.6, 1.0, 1}, {0.4, 0.3, -1}}),
                                       JumpLaw::normal(0.2, 0.7), JumpLaw::shifted_lognormal(0.05, 0.3)};
    const double cuts[][2] = {{0.1, 0.4}, {-0.5, 0.2}, {0.3, 2.0}, {-0.2, 0.05}};
    for (const auto& law : laws) {
        for (const auto& c : cuts) {
            const auto [mass, first] = law.partial_moments(c[0], c[1]);
            const double brk[] = {c[0], c[1]};
            const double qm = law.expectation([&](double z) { return z > c[0] && z <= c[1] ? 1.0 : 0.0; }, brk);
            const double qf = law.expectation([&](double z) { return z > c[0] && z <= c[1] ? z : 0.0; }, brk);
            CHECK_THAT(mass, WithinAbs(qm, 1e-11));
            CHECK_THAT(first, WithinAbs(qf, 1e-11));
        }
    }
}

TEST_CASE("sample means match the law within 4 standard errors", "[jump_law]") {
    const std::vector<JumpLaw> laws = {JumpLaw::exponential(0.5), JumpLaw::mixed_exponential({{0.6, 1.0, 1}, {0.4, 0.3, -1}}),
                                       JumpLaw::normal(0.2, 0.7), JumpLaw::shifted_lognormal(0.05, 0.3),
                                       JumpLaw::empirical({1.0, 2.0, 4.0}, {1.0, 1.0, 2.0})};
    const int n = 1000000;
    for (const auto& law : laws) {
        RngStream rng(11, 3);
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += law.sample(rng);
        const double sd = std::sqrt(law.moment(2) - law.mean() * law.mean());
        CHECK(std::abs(s / n - law.mean()) < 4 * sd / std::sqrt(double(n)));
    }
}

TEST_CASE("sampling matches the cdf by Kolmogorov-Smirnov", "[jump_law]") {
    const int n = 100000;
    const double critical = 1.949 / std::sqrt(double(n));  // significance 0.001
    CHECK(ks_statistic(JumpLaw::exponential(0.5), n, 1) < critical);
    CHECK(ks_statistic(JumpLaw::mixed_exponential({{0.6, 1.0, 1}, {0.4, 0.3, -1}}), n, 2) < critical);
    CHECK(ks_statistic(JumpLaw::normal(0.2, 0.7), n, 3) < critical);
    CHECK(ks_statistic(JumpLaw::shifted_lognormal(0.05, 0.3), n, 4) < critical);
}

TEST_CASE("penalties", "[penalty]") {
    const Penalty one = Penalty::one();
    CHECK(one(3.0, 4.0) == 1.0);
    CHECK(one.bound() == 1.0);
    const Penalty pw = Penalty::deficit_power(2);
    CHECK(pw(1.0, 3.0) == 9.0);
    CHECK(std::isinf(pw.bound()));
    const Penalty ind = Penalty::deficit_indicator(0.5);
    CHECK(ind(1.0, 0.5) == 1.0);
    CHECK(ind(1.0, 0.6) == 0.0);
    const Penalty tab = Penalty::table({0.0, 1.0}, {0.0, 2.0}, {0.0, 1.0, 2.0, 3.0});
    CHECK_THAT(tab(0.5, 1.0), WithinRel(1.5, 1e-15));
    CHECK_THAT(tab(5.0, 5.0), WithinRel(3.0, 1e-15));
    CHECK(tab.bound() == 3.0);
    CHECK_THROWS_AS(Penalty::table({0.0}, {0.0}, {-1.0}), InvalidArgument);
}

TEST_CASE("validate_model flags hypotheses without rejecting", "[operators]") {
    RiskParams m;
    m.p = 1.0;
    m.lambda_P = 1.0;
    m.sigma_P = 1.0;
    m.r = 0.05;
    m.sigma_R = 0.5;
    const auto rep = validate_model(m, JumpLaw::exponential(0.5), fixture::returns());
    CHECK(rep.net_profit);
    CHECK(rep.sigmaP_positive);
    CHECK(rep.FR_support_ok);
    CHECK_FALSE(rep.drift_dominance);
    CHECK_FALSE(rep.all_hold());
    CHECK_FALSE(rep.messages.empty());

    CHECK_THROWS_AS(validate_model(m, fixture::claims(), JumpLaw::point_mass(-1.0, JumpRole::ret)), InvalidArgument);
    CHECK_THROWS_AS(validate_model(m, fixture::claims(), JumpLaw::normal(0.0, 0.1, JumpRole::ret)), InvalidArgument);
    CHECK_THROWS_AS(validate_model(m, fixture::returns(), fixture::claims()), InvalidArgument);
}

TEST_CASE("generator on polynomial and constant test functions", "[operators]") {
    RiskParams m;
    m.p = 1.0;
    m.r = 0.1;
    m.sigma_P = 1.0;
    m.sigma_R = 0.5;
    const JumpLaw c = fixture::claims(), r = fixture::returns();
    const TestFunction one{[](double) { return 1.0; }, [](double) { return 0.0; }, [](double) { return 0.0; }};
    const TestFunction id{[](double y) { return y; }, [](double) { return 1.0; }, [](double) { return 0.0; }};
    const TestFunction sq{[](double y) { return y * y; }, [](double y) { return 2 * y; }, [](double) { return 2.0; }};
    CHECK_THAT(apply_generator(id, 3.0, m, c, r), WithinRel(1.3, 1e-14));
    CHECK_THAT(apply_generator(sq, 1.0, m, c, r), WithinRel(3.45, 1e-14));
    m.lambda_P = 1.0;
    m.lambda_R = 2.0;
    CHECK_THAT(apply_generator(one, 0.7, m, c, r), WithinAbs(0.0, 1e-15));
    // Quadrature drops 1e-12 of tail mass on each side.
    // y: the jumps add -lambda_P E[S_P] + lambda_R u E[S_R].
    CHECK_THAT(apply_generator(id, 2.0, m, c, r), WithinRel(1.2 - 0.5 + 2.0 * 2.0 * r.mean(), 1e-10));
}

TEST_CASE("operator G", "[operators]") {
    RiskParams m;
    m.p = 1.0;
    m.r = 0.1;
    m.sigma_P = 1.0;
    m.sigma_R = 0.5;
    const TestFunction one{[](double) { return 1.0; }, [](double) { return 0.0; }, [](double) { return 0.0; }};
    const JumpLaw below = JumpLaw::point_mass(0.5);
    CHECK(apply_G(one, 1.0, m, below, fixture::returns()) == 0.0);
    m.lambda_P = 1.0;
    m.lambda_R = 2.0;
    CHECK_THAT(apply_G(one, 1.0, m, below, fixture::returns()), WithinRel(3.0, 1e-11));

    // G h = L h + (lambda_P + lambda_R) h when every claim lands at or above 0.
    const TestFunction g = exp_minus();
    CHECK_THAT(apply_G(g, 1.0, m, below, fixture::returns()),
               WithinRel(apply_generator(g, 1.0, m, below, fixture::returns()) + 3.0 * g.f(1.0), 1e-10));
}

TEST_CASE("operator G against a brute-force trapezoid oracle", "[operators]") {
    RiskParams m = fixture::jumps(0.5);
    const JumpLaw c = fixture::claims(), r = fixture::returns();
    const double u = 1.0;
    const TestFunction g = exp_minus();
    // Claims: 2 int_0^1 e^{-(1-z)} e^{-2z} dz. Returns: lognormal in y = log(1+z).
    const int n = 400000;
    double claim = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double z = double(i) / n;
        const double w = (i == 0 || i == n) ? 0.5 : 1.0;
        claim += w * std::exp(-(u - z)) * 2.0 * std::exp(-2.0 * z);
    }
    claim /= n;
    double ret = 0.0;
    const double lo = -1.5, hi = 1.5;
    for (int i = 0; i <= n; ++i) {
        const double y = lo + (hi - lo) * i / n;
        const double w = (i == 0 || i == n) ? 0.5 : 1.0;
        const double dens = std::exp(-0.5 * y * y / 0.01) / std::sqrt(2 * M_PI * 0.01);
        ret += w * std::exp(-u * std::exp(y)) * dens;
    }
    ret *= (hi - lo) / n;
    const double expected = m.half_variance(u) * g.d2(u) + m.drift(u) * g.d1(u) + m.lambda_P * claim + m.lambda_R * ret;
    CHECK_THAT(apply_G(g, u, m, c, r), WithinAbs(expected, 1e-8));
}
