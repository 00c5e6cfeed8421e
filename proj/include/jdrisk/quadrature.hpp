#pragma once

#include <functional>
#include <span>
#include <vector>

namespace jdrisk::quad {

struct Options {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    unsigned max_depth = 24;
    /// Relative error above which the result is rejected; 0 means rel_tol.
    /// Lets a caller aim for more accuracy than it strictly requires.
    double fail_rel = 0.0;
};

struct Result {
    double value = 0.0;
    double error = 0.0;  // estimated absolute error
};

/// Adaptive Gauss-Kronrod (31-point) on [a, b]. Either limit may be infinite.
/// Throws NumericError carrying the achieved error when the requested
/// tolerance is not met within `max_depth` bisections.
Result adaptive(const std::function<double(double)>& f, double a, double b,
                const Options& opt = {});

/// Same as `adaptive` but splits [a, b] at the given interior breakpoints
/// (points where the integrand is not smooth). Breakpoints outside (a, b)
/// are ignored.
Result adaptive(const std::function<double(double)>& f, double a, double b,
                std::span<const double> breakpoints, const Options& opt = {});

/// Integrand that receives the evaluation point together with its exact
/// distances to the left and right ends of the finite interval; lets callers
/// evaluate factors such as (b - x)^nu without cancellation.
using EndpointAware = std::function<double(double x, double from_left, double from_right)>;

/// Tanh-sinh (double exponential) quadrature on a finite interval. Tolerates
/// integrable algebraic singularities at either endpoint.
Result endpoint_singular(const EndpointAware& f, double a, double b,
                         const Options& opt = {});

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Rule with `n` points (1 <= n <= 64), computed by Newton iteration on the
/// Legendre polynomial and cached per thread.
const GaussRule& gauss_legendre(int n);

}  // namespace jdrisk::quad
