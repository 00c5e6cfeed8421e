#pragma once

#include "jdrisk/model/params.hpp"

namespace jdrisk {

struct AlphaBeta {
    double alpha;
    double beta;
};

/// Exponents of the D/E solutions of the jump-free discounted equation:
///   root = sqrt((2r/sigma_R^2 - 1)^2 + 8 delta/sigma_R^2),
///   beta = root - 1,  alpha = (root - 1 - 2r/sigma_R^2) / 2.
/// alpha > 0 exactly when delta > r.
AlphaBeta alpha_beta(double delta, double r, double sigma_R);

/// Parameters of D(x, lambda) and E(x, lambda).
///
/// The functions solve
///   (1/2)(s^2 + sigma_R^2 x^2) h'' + (k + r x) h' = delta h,
/// the jump-free discounted equation after the shift x = u + rho sigma_P / sigma_R,
/// with s = sigma_P sqrt(1 - rho^2) and k = c - r rho sigma_P / sigma_R. The
/// integrals are written in terms of (s, k); at rho = 0 they are (sigma_P, c).
struct DEParams {
    double c = 1.0;  ///< premium drift: p, or p - mu above a dividend threshold
    double sigma_P = 1.0;
    double sigma_R = 1.0;
    double r = 0.0;
    double delta = 0.0;
    double rho = 0.0;

    static DEParams from_model(const RiskParams& m, double mu = 0.0);

    void validate() const;
    double effective_sigma() const;  ///< s
    double effective_drift() const;  ///< k
    double shift() const { return rho * sigma_P / sigma_R; }
    AlphaBeta exponents() const { return alpha_beta(delta, r, sigma_R); }
};

struct DEValue {
    double D;
    double E;
};

/// D(x, lambda) and E(x, lambda) by tanh-sinh quadrature, which absorbs the
/// integrable endpoint singularities of (cos t)^(beta - lambda) and, for
/// lambda < 0, of the power factor. Requires beta - lambda > -1 and lambda > -1.
/// Throws NumericError when the relative tolerance `rel_tol` is not met.
DEValue eval_DE(double x, double lambda, const DEParams& params, double rel_tol = 1e-13);

struct DerivativePair {
    double lhs;  ///< central difference in x
    double rhs;  ///< identity value
};

struct DEDerivativeCheck {
    DerivativePair D;  ///< rhs = -lambda D(x, lambda - 1)
    DerivativePair E;  ///< rhs = +lambda E(x, lambda - 1)
};

/// Compares central differences of D and E in x with the identities
/// dD/dx = -lambda D(x, lambda - 1) and dE/dx = lambda E(x, lambda - 1).
DEDerivativeCheck de_derivative_check(double x, double lambda, const DEParams& params, double step = 1e-5);

}  // namespace jdrisk
