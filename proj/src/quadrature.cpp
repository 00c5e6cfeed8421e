#include "jdrisk/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "jdrisk/errors.hpp"

namespace jdrisk::quad {

namespace {

void check(const Result& r, double l1, const Options& opt, const char* who, double a, double b) {
    const double allowed = std::max((opt.fail_rel > 0 ? opt.fail_rel : opt.rel_tol) * l1, opt.abs_tol);
    if (!std::isfinite(r.value)) {
        std::ostringstream os;
        os << who << ": non-finite integral on [" << a << ", " << b << "]";
        throw NumericError(os.str(), r.error);
    }
    if (r.error > allowed) {
        std::ostringstream os;
        os << who << ": quadrature did not converge on [" << a << ", " << b
           << "]; achieved absolute error " << r.error << ", allowed " << allowed;
        throw NumericError(os.str(), r.error);
    }
}

}  // namespace

Result adaptive(const std::function<double(double)>& f, double a, double b, const Options& opt) {
    if (a == b) return {};
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    Result r;
    double l1 = 0.0;
    r.value = GK::integrate(f, a, b, opt.max_depth, opt.rel_tol, &r.error, &l1);
    check(r, l1, opt, "adaptive Gauss-Kronrod", a, b);
    return r;
}

Result adaptive(const std::function<double(double)>& f, double a, double b,
                std::span<const double> breakpoints, const Options& opt) {
    std::vector<double> cuts{a};
    for (double x : breakpoints)
        if (x > a && x < b) cuts.push_back(x);
    std::sort(cuts.begin() + 1, cuts.end());
    cuts.push_back(b);
    Result total;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] <= cuts[i]) continue;
        Result piece = adaptive(f, cuts[i], cuts[i + 1], opt);
        total.value += piece.value;
        total.error += piece.error;
    }
    return total;
}

Result endpoint_singular(const EndpointAware& f, double a, double b, const Options& opt) {
    if (a == b) return {};
    if (b < a) {
        Result r = endpoint_singular(
            [&](double x, double l, double rr) { return f(x, rr, l); }, b, a, opt);
        r.value = -r.value;
        return r;
    }
    thread_local boost::math::quadrature::tanh_sinh<double> integrator(15);
    // Integrate over [0, 1] and rescale: Boost's error estimate has an absolute
    // floor that does not shrink with the interval width.
    const double width = b - a;
    // Boost passes vc < 0 as (minus) the distance to 0, vc > 0 as the distance to 1.
    auto g = [&](double v, double vc) {
        double from_left, from_right;
        if (vc < 0) {
            from_left = -vc * width;
            from_right = width - from_left;
        } else {
            from_right = vc * width;
            from_left = width - from_right;
        }
        return f(a + v * width, from_left, from_right);
    };
    Result r;
    double l1 = 0.0;
    r.value = integrator.integrate(g, 0.0, 1.0, opt.rel_tol, &r.error, &l1) * width;
    r.error *= width;
    l1 *= width;
    check(r, l1, opt, "tanh-sinh", a, b);
    return r;
}

const GaussRule& gauss_legendre(int n) {
    JDRISK_REQUIRE(n >= 1 && n <= 64, "gauss_legendre: order must be in [1, 64]");
    thread_local std::map<int, GaussRule> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = pk;
        }
        dp = (n == 1) ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return cache.emplace(n, std::move(rule)).first->second;
}

}  // namespace jdrisk::quad
