#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>

#include "jdrisk/idesolver/grid.hpp"
#include "jdrisk/model/jump_law.hpp"
#include "jdrisk/model/params.hpp"

namespace jdrisk {

/// A linear integro-differential equation on [0, u_max] in the canonical form
///
///   a(u) h'' + b(u) h' - q h + lambda_P int_{z <= u} h(u - z) dF_P(z)
///            + lambda_R E[h(u (1 + Z_R))] + s(u) = 0,
///
/// with a(u) the half variance, b(u) = p + r u - mu 1{u > threshold} and
/// q = discount + lambda_P + lambda_R. At u = threshold the drift and the
/// threshold source are averaged over both sides.
struct EquationSpec {
    RiskParams params;
    std::optional<JumpLaw> claim_law;   ///< required when lambda_P > 0
    std::optional<JumpLaw> return_law;  ///< required when lambda_R > 0
    double discount = 0.0;
    double threshold = std::numeric_limits<double>::infinity();
    double mu = 0.0;
    std::function<double(double)> source;        ///< empty means 0
    std::function<double(double)> source_above;  ///< added for u > threshold
    std::optional<double> left_value;            ///< Dirichlet value at 0; empty: the equation holds at 0
    FarField right = FarField::constant(0.0);    ///< condition at u_max and extension beyond it
    std::string name;

    double a(double u) const { return params.half_variance(u); }
    double b(double u) const;
    double q() const { return discount + params.lambda_P + params.lambda_R; }
    double s(double u) const;
    bool has_jumps() const { return params.lambda_P > 0 || params.lambda_R > 0; }
    void validate() const;
};

}  // namespace jdrisk
