#pragma once

#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "jdrisk/idesolver/equation.hpp"
#include "jdrisk/idesolver/grid.hpp"

namespace jdrisk::detail {

/// Discretised jump terms: lambda_P J_P[h](u_i) + lambda_R J_R[h](u_i)
/// = (W h)_i + offset_i for the piecewise-linear interpolant of h and the
/// far-field extension beyond u_max. Cell integrals use exact partial moments
/// of the laws; the extension part uses adaptive quadrature.
struct JumpOperator {
    Eigen::MatrixXd W;
    Eigen::VectorXd offset;
};

/// Jump terms at a single point u >= 0 as weights on grid values plus an offset.
struct JumpRow {
    std::vector<std::pair<int, double>> weights;
    double offset = 0.0;

    double apply(std::span<const double> values) const;
};

JumpRow jump_row(const EquationSpec& spec, const Grid& grid, double u);

JumpOperator assemble_jump_operator(const EquationSpec& spec, const Grid& grid);

}  // namespace jdrisk::detail
