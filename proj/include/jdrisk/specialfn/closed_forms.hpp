#pragma once

#include <string>
#include <vector>

#include "jdrisk/model/params.hpp"
#include "jdrisk/specialfn/de_functions.hpp"

namespace jdrisk {

/// Value and first two derivatives in u of a closed-form solution.
struct Jet {
    double value;
    double d1;
    double d2;
};

/// K(u) = int_0^u y^(-2r/sigma_R^2) exp(2 q / (sigma_R^2 y)) dv with
/// y = v + sigma_P/sigma_R and q = p - r sigma_P/sigma_R: the scale function of
/// the jump-free, undiscounted surplus when rho = +1. The integrand is scaled by
/// a constant chosen to avoid overflow; only ratios of K are meaningful.
/// Requires rho = 1, lambda_P = lambda_R = delta = 0, sigma_P, sigma_R > 0 and
/// r - sigma_R^2/2 > 0. u may be +inf.
double eval_K(double u, const RiskParams& params);

/// Ruin probability 1 - K(u)/K(inf), computed from the tail integral so that
/// small values keep their relative accuracy.
double closed_ruin_rho1(double u, const RiskParams& params);
Jet closed_ruin_rho1_jet(double u, const RiskParams& params);

/// Discounted ruin probability without jumps and with w = 1:
/// D(u + rho sigma_P/sigma_R, alpha + 1) / D(rho sigma_P/sigma_R, alpha + 1).
/// Requires lambda_P = lambda_R = 0, delta > r, rho^2 < 1.
class GerberNoJumps {
public:
    explicit GerberNoJumps(const RiskParams& params);
    Jet jet(double u) const;
    double operator()(double u) const { return jet(u).value; }

private:
    DEParams de_;
    AlphaBeta ab_;
    double scale_;
};

double closed_gerber_no_jumps(double u, const RiskParams& params);

/// Expected discounted dividends under the threshold strategy (rate mu above b),
/// C3 D + C4 E below b and C5 D1 + mu/delta above, with the constants obtained
/// by solving the conditions V(0) = 0, value pasting and slope pasting at b.
class ThresholdClosedForm {
public:
    ThresholdClosedForm(const RiskParams& params, double b, double mu);
    Jet jet(double u) const;
    double operator()(double u) const { return jet(u).value; }

    double C3() const { return c_[0]; }
    double C4() const { return c_[1]; }
    double C5() const { return c_[2]; }
    double condition_number() const { return cond_; }
    /// Constants from the printed expressions, for comparison.
    std::vector<double> printed_constants() const { return printed_; }
    /// Non-empty when the printed constants differ from the solved ones by more than 1e-6 (relative).
    const std::vector<std::string>& warnings() const { return warnings_; }

private:
    DEParams lower_, upper_;
    AlphaBeta ab_;
    double b_, mu_, delta_;
    double c_[3];
    double cond_ = 0.0;
    std::vector<double> printed_;
    std::vector<std::string> warnings_;
};

double closed_threshold_value(double u, double b, double mu, const RiskParams& params);

/// Expected discounted dividends under the barrier strategy at b for 0 <= u <= b,
/// C7 D + C8 E with V(0) = 0 and V'(b) = 1.
class BarrierClosedForm {
public:
    BarrierClosedForm(const RiskParams& params, double b);
    Jet jet(double u) const;
    double operator()(double u) const { return jet(u).value; }

    double C7() const { return c7_; }
    double C8() const { return c8_; }
    double printed_C7() const { return p7_; }
    double printed_C8() const { return p8_; }
    const std::vector<std::string>& warnings() const { return warnings_; }

private:
    DEParams de_;
    AlphaBeta ab_;
    double b_;
    double c7_, c8_, p7_, p8_;
    std::vector<std::string> warnings_;
};

double closed_barrier_value(double u, double b, const RiskParams& params);

}  // namespace jdrisk
