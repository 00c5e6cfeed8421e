#include "jdrisk/specialfn/de_functions.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "jdrisk/errors.hpp"
#include "jdrisk/quadrature.hpp"

namespace jdrisk {

namespace {

double log_sinc(double x) { return x < 1e-4 ? -x * x / 6.0 : std::log(std::sin(x) / x); }

// int_0^len sin(tau)^a sin(len - tau)^c exp(log_c + g(tau)) dtau, with a, c > -1.
// The interval is split in half; on a half whose end carries a negative
// exponent e, tau = w^(1/(1+e)) cancels the singular factor exactly.
double sine_power_integral(double a, double c, double len, double log_c, const std::function<double(double)>& g,
                           const quad::Options& opt) {
    const double half = 0.5 * len;
    auto piece = [&](double e, double e_other, bool from_left) {
        auto value = [&](double near, double near_log_power) {
            const double far = len - near;
            const double tau = from_left ? near : far;
            return std::exp(near_log_power + e_other * std::log(std::sin(far)) + log_c + g(tau));
        };
        if (e >= 0) {
            return quad::endpoint_singular(
                       [&](double, double dl, double) { return value(dl, e * std::log(std::sin(dl))); }, 0.0, half,
                       opt)
                .value;
        }
        const double p = 1.0 / (1.0 + e);
        return quad::endpoint_singular(
                   [&](double, double wl, double) {
                       const double near = std::pow(wl, p);
                       return value(near, e * log_sinc(near) + std::log(p));
                   },
                   0.0, std::pow(half, 1.0 + e), opt)
            .value;
    };
    return piece(a, c, true) + piece(c, a, false);
}

}  // namespace

AlphaBeta alpha_beta(double delta, double r, double sigma_R) {
    JDRISK_REQUIRE(sigma_R > 0, "alpha_beta: sigma_R must be positive");
    JDRISK_REQUIRE(delta >= 0, "alpha_beta: delta must be nonnegative");
    const double s2 = sigma_R * sigma_R;
    const double q = 2.0 * r / s2;
    const double root = std::sqrt((q - 1.0) * (q - 1.0) + 8.0 * delta / s2);
    return {0.5 * (root - (1.0 + q)), root - 1.0};
}

DEParams DEParams::from_model(const RiskParams& m, double mu) {
    DEParams d;
    d.c = m.p - mu;
    d.sigma_P = m.sigma_P;
    d.sigma_R = m.sigma_R;
    d.r = m.r;
    d.delta = m.delta;
    d.rho = m.rho;
    return d;
}

void DEParams::validate() const {
    JDRISK_REQUIRE(sigma_P > 0, "D/E functions require sigma_P > 0");
    JDRISK_REQUIRE(sigma_R > 0, "D/E functions require sigma_R > 0");
    JDRISK_REQUIRE(rho * rho < 1.0, "D/E functions require rho^2 < 1");
    JDRISK_REQUIRE(delta >= 0, "D/E functions require delta >= 0");
}

double DEParams::effective_sigma() const { return sigma_P * std::sqrt(1.0 - rho * rho); }
double DEParams::effective_drift() const { return c - r * rho * sigma_P / sigma_R; }

DEValue eval_DE(double x, double lambda, const DEParams& params, double rel_tol) {
    params.validate();
    const AlphaBeta ab = params.exponents();
    const double nu = ab.beta - lambda;
    if (!(nu > -1.0) || !(lambda > -1.0)) {
        std::ostringstream os;
        os << "eval_DE: divergent endpoint (beta - lambda = " << nu << ", lambda = " << lambda << ")";
        throw InvalidArgument(os.str());
    }
    const double s = params.effective_sigma();
    const double k = params.effective_drift();
    const double sr = params.sigma_R;
    const double theta0 = std::atan2(sr * x, s);
    const double R = std::hypot(s, sr * x);
    const double rate = 2.0 * k / (s * sr);
    const double log_norm = (1.0 + ab.beta) * std::log(s) + (1.0 + lambda) * std::log(sr);

    quad::Options opt;
    opt.rel_tol = rel_tol;
    opt.fail_rel = std::max(rel_tol, 1e-10);

    // D: t from theta0 to pi/2. With tau = t - theta0 the power factor is
    // R sin(tau) and cos t = sin(pi/2 - t). The exponential is referenced to its
    // value at theta0 to avoid overflow.
    const double lenD = std::atan2(s, sr * x);
    const double scale = std::exp(-rate * theta0 - log_norm);
    double D = 0.0;
    if (lenD > 0) {
        D = sine_power_integral(lambda, nu, lenD, lambda * std::log(R), [&](double tau) { return -rate * tau; }, opt) *
            scale;
    }

    // E: t from -pi/2 to theta0; cos t = sin(t + pi/2), power factor R sin(theta0 - t).
    const double lenE = std::atan2(s, -sr * x);
    double E = 0.0;
    if (lenE > 0) {
        E = sine_power_integral(nu, lambda, lenE, lambda * std::log(R),
                                [&](double tau) { return rate * (lenE - tau); }, opt) *
            scale;
    }
    return {D, E};
}

DEDerivativeCheck de_derivative_check(double x, double lambda, const DEParams& params, double step) {
    JDRISK_REQUIRE(lambda > 1.0, "de_derivative_check: lambda must exceed 1");
    const DEValue hi = eval_DE(x + step, lambda, params);
    const DEValue lo = eval_DE(x - step, lambda, params);
    const DEValue lower = eval_DE(x, lambda - 1.0, params);
    return {{(hi.D - lo.D) / (2 * step), -lambda * lower.D},
            {(hi.E - lo.E) / (2 * step), lambda * lower.E}};
}

}  // namespace jdrisk
