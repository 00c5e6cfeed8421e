#pragma once

#include <optional>
#include <string>
#include <vector>

#include "jdrisk/idesolver/grid.hpp"
#include "jdrisk/model/jump_law.hpp"
#include "jdrisk/model/params.hpp"

namespace jdrisk {

/// Large-u symbol of the operator
///   h -> a(u) h'' + (b0 + b1 u) h' - (discount + lambda_P + lambda_R) h
///        + lambda_P E[h(u - Z_P)] + lambda_R E[h(u (1 + Z_R))],
/// with a(u) = a0 + a1 u + a2 u^2, acting on u^(-s) and exp(-R u).
///
/// On u^(-s) it produces sum_k T_k(s) u^(-s-k) with T_0 = P, the indicial
/// polynomial-like function
///   P(s) = a2 s(s+1) - b1 s + lambda_R (E[(1+Z_R)^(-s)] - 1) - discount,
/// and T_1 = a1 s(s+1) - b0 s + lambda_P m1 s,
/// T_2 = a0 s(s+1) + lambda_P m2 s(s+1)/2, T_k = lambda_P m_k (s)_k / k!.
struct TailOperator {
    double a0 = 0, a1 = 0, a2 = 0, b0 = 0, b1 = 0;
    double discount = 0;
    double lambda_P = 0, lambda_R = 0;
    std::vector<double> claim_moments;  ///< m_0 .. m_K
    std::optional<JumpLaw> claim_law, return_law;

    static TailOperator from(const RiskParams& m, const JumpLaw& claim_law, const JumpLaw& return_law,
                             double discount, double drift_reduction = 0.0);

    double P(double s) const;
    double T(int k, double s) const;
    /// Symbol on exp(-R u); only meaningful when a1 = a2 = b1 = lambda_R = 0.
    double exp_symbol(double R) const;
    bool exponential_regime() const { return a1 == 0 && a2 == 0 && b1 == 0 && lambda_R == 0; }
};

/// sum_j coef[j] u^(-rate - j)  (power), or coef[0] exp(-rate u)  (exponential).
struct TailFamily {
    enum class Kind { power, exponential };
    Kind kind = Kind::power;
    double rate = 0.0;
    std::vector<double> coef;

    double value(double u) const;
    double slope(double u) const;
    TailFamily scaled(double factor) const;
};

/// Decaying solution of the homogeneous large-u equation, normalised to a
/// leading coefficient of 1: a power series u^(-gamma) (1 + c1/u + ...) with
/// gamma the smallest positive root of P, or exp(-R u) in the exponential
/// regime. nullopt when no decaying family exists.
std::optional<TailFamily> homogeneous_tail(const TailOperator& op, double u_max);

/// Particular solution d of op[d] = -factor * source for one source family.
TailFamily forced_tail(const TailOperator& op, const TailFamily& source, double factor, double u_max);

/// Asymptotic form A + (forced families) + amplitude * (homogeneous family).
struct TailModel {
    double asymptote = 0.0;
    std::vector<TailFamily> forced;
    std::optional<TailFamily> homogeneous;

    /// Builds the far field at u_max; derivative kind when a homogeneous family
    /// exists (its amplitude follows from the last nodal value), else Dirichlet.
    FarField far_field(double u_max) const;
    /// All families with the homogeneous amplitude fixed by h_last.
    std::vector<TailFamily> families(double h_last, double u_max) const;
    std::string describe() const;
};

/// Far-field model for an equation with the given operator and asymptote,
/// forced by factor * (families of a previously solved function).
TailModel make_tail_model(const TailOperator& op, double asymptote, double u_max,
                          const std::vector<TailFamily>& forcing = {}, double factor = 0.0);

}  // namespace jdrisk
