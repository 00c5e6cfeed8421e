#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "jdrisk/idesolver/equation.hpp"
#include "jdrisk/idesolver/far_field.hpp"
#include "jdrisk/idesolver/grid.hpp"
#include "jdrisk/model/penalty.hpp"
#include "jdrisk/specialfn/closed_forms.hpp"

namespace jdrisk {

enum class IdeMethod {
    fixed_point,  ///< iterate on the jump integrals, one banded solve per sweep
    direct,       ///< one dense LU solve of the full discretisation
};

struct SolveOptions {
    IdeMethod method = IdeMethod::fixed_point;
    double tol = 1e-8;               ///< sup-norm change between sweeps
    int max_iter = 500;
    bool direct_fallback = true;     ///< finish with a direct solve when the iteration stalls
    int residual_probes = 200;
};

struct IDESolution {
    GridFunction solution;
    double residual = 0.0;       ///< sup-norm residual at the probe nodes
    int iterations = 0;
    double last_change = 0.0;
    std::string method;
    TailModel tail;
    std::vector<std::string> notes;
};

/// Second-order central differences (upwinded where the diffusion is too weak
/// for the grid), Dirichlet data at 0 when given, and the far-field condition
/// at u_max imposed through a ghost node.
IDESolution solve_equation(const EquationSpec& spec, const Grid& grid, const SolveOptions& opt = {},
                           TailModel tail = {});

/// Jump-free boundary value problem; throws InvalidArgument if the equation has jump terms.
GridFunction solve_linear_bvp(const EquationSpec& spec, const Grid& grid);

enum class GSVariant { phi, phi_s, phi_d };

/// Gerber-Shiu equation for phi, phi_s (claim ruin) or phi_d (oscillation ruin).
EquationSpec gerber_equation(const RiskParams& params, const JumpLaw& claim_law, const JumpLaw& return_law,
                             const Penalty& penalty, GSVariant variant, double u_max, TailModel* tail = nullptr);

IDESolution solve_gerber_ide(const RiskParams& params, const JumpLaw& claim_law, const JumpLaw& return_law,
                             const Penalty& penalty, GSVariant variant, const Grid& grid,
                             const SolveOptions& opt = {});

struct MomentSolutions {
    std::vector<IDESolution> moments;  ///< V_1 .. V_k
    double b_used = 0.0;               ///< threshold after snapping to the grid
    double snap_distance = 0.0;
};

/// Discounted dividend moments under the threshold strategy, k = 1..k_max.
MomentSolutions solve_threshold_moments(const RiskParams& params, const JumpLaw& claim_law,
                                        const JumpLaw& return_law, double b, double mu, int k_max,
                                        const Grid& grid, const SolveOptions& opt = {});

/// Discounted dividend moments under the barrier strategy, on a grid ending at b.
/// Jumps above b are valued as an immediate payout of the excess:
/// V_k(v) = sum_j C(k, j) (v - b)^(k - j) V_j(b).
MomentSolutions solve_barrier_moments(const RiskParams& params, const JumpLaw& claim_law,
                                      const JumpLaw& return_law, double b, int k_max, const Grid& grid,
                                      const SolveOptions& opt = {});

/// Sup-norm residual of a grid function at the probe points. Derivatives by
/// central differences with the grid spacing, jump integrals exact for the
/// piecewise-linear interpolant and its far-field extension.
double residual(const GridFunction& candidate, const EquationSpec& spec, std::span<const double> probes);

/// Same for an analytic candidate given with its derivatives.
double residual(const std::function<Jet(double)>& candidate, const EquationSpec& spec,
                std::span<const double> probes);

}  // namespace jdrisk
