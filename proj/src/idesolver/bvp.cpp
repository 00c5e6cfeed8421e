#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "internal.hpp"
#include "jdrisk/errors.hpp"
#include "jdrisk/idesolver/solvers.hpp"

namespace jdrisk {

double EquationSpec::b(double u) const {
    double v = params.drift(u);
    if (u > threshold) v -= mu;
    else if (u == threshold) v -= 0.5 * mu;
    return v;
}

double EquationSpec::s(double u) const {
    double v = source ? source(u) : 0.0;
    if (source_above) {
        if (u > threshold) v += source_above(u);
        else if (u == threshold) v += 0.5 * source_above(u);
    }
    return v;
}

void EquationSpec::validate() const {
    params.validate();
    JDRISK_REQUIRE(params.lambda_P == 0 || claim_law, "EquationSpec: lambda_P > 0 needs a claim law");
    JDRISK_REQUIRE(params.lambda_R == 0 || return_law, "EquationSpec: lambda_R > 0 needs a return law");
    JDRISK_REQUIRE(discount >= 0, "EquationSpec: discount must be nonnegative");
    JDRISK_REQUIRE(right.c0 && right.c1, "EquationSpec: far field extension missing");
    if (params.sigma_P > 0)
        JDRISK_REQUIRE(left_value.has_value(), "EquationSpec: sigma_P > 0 requires a boundary value at 0");
}

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

struct Discretisation {
    Triplets local;
    Eigen::VectorXd rhs;
    std::vector<bool> pinned;  // Dirichlet rows carry no jump terms
};

Discretisation discretise(const EquationSpec& spec, const Grid& grid) {
    const int n = grid.n(), N = n - 1;
    const double H = grid.h(), H2 = H * H;
    Discretisation d{{}, Eigen::VectorXd::Zero(n), std::vector<bool>(static_cast<std::size_t>(n), false)};
    const double q = spec.q();

    if (spec.left_value) {
        d.local.emplace_back(0, 0, 1.0);
        d.rhs(0) = *spec.left_value;
        d.pinned[0] = true;
    } else {
        const double a = spec.a(0.0), b = spec.b(0.0);
        if (b <= 0 && a <= 0) throw InvalidArgument(spec.name + ": degenerate equation at u = 0 needs a boundary value");
        // One-sided second-order first derivative.
        d.local.emplace_back(0, 0, -1.5 * b / H + a / H2 - q);
        d.local.emplace_back(0, 1, 2.0 * b / H - 2.0 * a / H2);
        d.local.emplace_back(0, 2, -0.5 * b / H + a / H2);
        d.rhs(0) = -spec.s(0.0);
    }

    for (int i = 1; i < N; ++i) {
        const double u = grid.node(i);
        const double a = spec.a(u), b = spec.b(u);
        double lo = a / H2, up = a / H2, diag = -2.0 * a / H2 - q;
        if (a < std::abs(b) * H / 2) {
            if (b > 0) { up += b / H; diag -= b / H; }
            else { lo -= b / H; diag += b / H; }
        } else {
            lo -= b / (2 * H);
            up += b / (2 * H);
        }
        d.local.emplace_back(i, i - 1, lo);
        d.local.emplace_back(i, i, diag);
        d.local.emplace_back(i, i + 1, up);
        d.rhs(i) = -spec.s(u);
    }

    const FarField& far = spec.right;
    if (far.kind == FarField::Kind::dirichlet) {
        d.local.emplace_back(N, N, 1.0);
        d.rhs(N) = far.value;
        d.pinned[static_cast<std::size_t>(N)] = true;
    } else {
        const double u = grid.node(N);
        const double a = spec.a(u), b = spec.b(u);
        const double g = 2.0 * a / H + b;  // ghost node h_{N+1} = h_{N-1} + 2H (d0 + d1 h_N)
        d.local.emplace_back(N, N - 1, 2.0 * a / H2);
        d.local.emplace_back(N, N, -2.0 * a / H2 + g * far.d1 - q);
        d.rhs(N) = -spec.s(u) - g * far.d0;
    }
    return d;
}

std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

std::vector<double> residual_probes(const Grid& grid, int count) {
    const int N = grid.n() - 1;
    const int stride = std::max(1, (N - 1) / std::max(1, count));
    std::vector<double> probes;
    for (int i = 1; i < N; i += stride) probes.push_back(grid.node(i));
    return probes;
}

}  // namespace

IDESolution solve_equation(const EquationSpec& spec, const Grid& grid, const SolveOptions& opt, TailModel tail) {
    spec.validate();
    const int n = grid.n();
    Discretisation d = discretise(spec, grid);
    Eigen::SparseMatrix<double> L(n, n);
    L.setFromTriplets(d.local.begin(), d.local.end());
    L.makeCompressed();

    Eigen::VectorXd h;
    int iterations = 0;
    double change = 0.0;
    std::string method;
    std::vector<std::string> notes;

    auto sparse_solve = [&](const Eigen::VectorXd& rhs, Eigen::SparseLU<Eigen::SparseMatrix<double>>& lu) {
        Eigen::VectorXd x = lu.solve(rhs);
        if (lu.info() != Eigen::Success || !x.allFinite()) throw NumericError(spec.name + ": singular banded system");
        return x;
    };

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.analyzePattern(L);
    lu.factorize(L);
    if (lu.info() != Eigen::Success) throw NumericError(spec.name + ": singular banded system");

    if (!spec.has_jumps()) {
        h = sparse_solve(d.rhs, lu);
        method = "banded";
    } else {
        detail::JumpOperator J = detail::assemble_jump_operator(spec, grid);
        for (int i = 0; i < n; ++i)
            if (d.pinned[static_cast<std::size_t>(i)]) {
                J.W.row(i).setZero();
                J.offset(i) = 0.0;
            }
        const Eigen::VectorXd base = d.rhs - J.offset;

        auto direct = [&] {
            Eigen::MatrixXd A = Eigen::MatrixXd(L) + J.W;
            Eigen::PartialPivLU<Eigen::MatrixXd> dense(A);
            Eigen::VectorXd x = dense.solve(base);
            if (!x.allFinite()) throw NumericError(spec.name + ": singular dense system");
            return x;
        };

        if (opt.method == IdeMethod::direct) {
            h = direct();
            method = "direct";
        } else {
            h = sparse_solve(base, lu);
            double omega = 1.0, previous = std::numeric_limits<double>::infinity();
            bool converged = false;
            for (iterations = 1; iterations <= opt.max_iter; ++iterations) {
                Eigen::VectorXd next = sparse_solve(base - J.W * h, lu);
                if (omega < 1.0) next = omega * next + (1.0 - omega) * h;
                change = (next - h).lpNorm<Eigen::Infinity>();
                h = std::move(next);
                if (change < opt.tol) {
                    converged = true;
                    break;
                }
                if (iterations > 5 && change > previous && omega == 1.0) {
                    omega = 0.5;
                    notes.push_back("fixed point: non-monotone change after sweep " + std::to_string(iterations) +
                                    ", relaxation 0.5");
                }
                previous = change;
            }
            method = "fixed_point";
            if (!converged) {
                iterations = std::min(iterations, opt.max_iter);
                std::ostringstream os;
                os << spec.name << ": fixed point not converged after " << opt.max_iter
                   << " sweeps (last change " << change << ")";
                if (!opt.direct_fallback) throw NumericError(os.str(), change);
                notes.push_back(os.str() + "; finished with a direct solve");
                h = direct();
                method = "fixed_point+direct";
            }
        }
    }

    // Pivoting leaves rounding noise on the identity rows.
    for (int i = 0; i < n; ++i)
        if (d.pinned[static_cast<std::size_t>(i)]) h(i) = d.rhs(i);

    IDESolution sol{GridFunction(grid, to_vector(h), spec.right), 0.0, iterations, change, method, std::move(tail),
                    std::move(notes)};
    const auto probes = residual_probes(grid, opt.residual_probes);
    sol.residual = residual(sol.solution, spec, probes);
    return sol;
}

GridFunction solve_linear_bvp(const EquationSpec& spec, const Grid& grid) {
    JDRISK_REQUIRE(!spec.has_jumps(), "solve_linear_bvp: equation has jump terms");
    SolveOptions opt;
    opt.residual_probes = 0;
    return solve_equation(spec, grid, opt).solution;
}

}  // namespace jdrisk
