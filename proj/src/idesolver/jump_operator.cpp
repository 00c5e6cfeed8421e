#include <algorithm>
#include <cmath>

#include "internal.hpp"
#include "jdrisk/errors.hpp"

namespace jdrisk::detail {

namespace {

// Adds the hat-function weights of one cell [v_j, v_j + H] given the mass M
// and the first moment I = int v dF over the cell.
void add_cell(JumpRow& row, int j, double vj, double H, double M, double I, double scale) {
    if (M == 0.0) return;
    row.weights.emplace_back(j, scale * ((vj + H) * M - I) / H);
    row.weights.emplace_back(j + 1, scale * (I - vj * M) / H);
}

// Integral of the far-field extension over the part of the law that lands
// beyond u_max; `landing` maps a jump z to the post-jump surplus, `beyond`
// selects z whose landing point exceeds u_max, `cut` is the boundary in z.
template <class Landing, class Beyond>
void add_tail(JumpRow& row, const JumpLaw& law, const FarField& far, int N, Landing landing, Beyond beyond,
              double cut, double scale) {
    const double breaks[] = {cut};
    row.offset += scale * law.expectation([&](double z) { return beyond(z) ? far.c0(landing(z)) : 0.0; }, breaks);
    row.weights.emplace_back(
        N, scale * law.expectation([&](double z) { return beyond(z) ? far.c1(landing(z)) : 0.0; }, breaks));
}

}  // namespace

double JumpRow::apply(std::span<const double> values) const {
    double v = offset;
    for (const auto& [j, w] : weights) v += w * values[j];
    return v;
}

JumpRow jump_row(const EquationSpec& spec, const Grid& grid, double u) {
    const int N = grid.n() - 1;
    const double H = grid.h(), u_max = grid.u_max();
    const RiskParams& m = spec.params;
    JumpRow row;

    if (m.lambda_P > 0) {
        const JumpLaw& law = *spec.claim_law;
        const auto [zlo, zhi] = law.effective_support();
        const bool two_sided = law.support_min() < 0;
        // v = u - z over cells intersecting [u - zhi, u - zlo] within [0, u_max].
        const int j0 = std::max(0, static_cast<int>(std::floor((u - zhi) / H)) - 1);
        const int j1 = std::min(N - 1, static_cast<int>(std::ceil((u - zlo) / H)) + 1);
        for (int j = j0; j <= j1; ++j) {
            const double vj = grid.node(j), vk = grid.node(j + 1);
            if (vj > u && !two_sided) break;
            const auto [M, Z1] = law.partial_moments(u - vk, u - vj);
            add_cell(row, j, vj, vk - vj, M, u * M - Z1, m.lambda_P);
        }
        if (two_sided && u - zlo > u_max) {
            const double cut = u - u_max;
            add_tail(row, law, spec.right, N, [u](double z) { return u - z; }, [cut](double z) { return z <= cut; },
                     cut, m.lambda_P);
        }
    }

    if (m.lambda_R > 0) {
        const JumpLaw& law = *spec.return_law;
        const auto [zlo, zhi] = law.effective_support();
        if (u <= 0.0) {
            row.weights.emplace_back(0, m.lambda_R);  // u = 0 stays at 0
            return row;
        }
        const double vlo = std::max(0.0, u * (1.0 + zlo)), vhi = u * (1.0 + zhi);
        const int j0 = std::max(0, static_cast<int>(std::floor(vlo / H)) - 1);
        const int j1 = std::min(N - 1, static_cast<int>(std::ceil(vhi / H)) + 1);
        for (int j = j0; j <= j1; ++j) {
            const double vj = grid.node(j), vk = grid.node(j + 1);
            const auto [M, Z1] = law.partial_moments(j == 0 ? -1.0 : vj / u - 1.0, vk / u - 1.0);
            add_cell(row, j, vj, vk - vj, M, u * (M + Z1), m.lambda_R);
        }
        if (vhi > u_max) {
            const double cut = u_max / u - 1.0;
            add_tail(row, law, spec.right, N, [u](double z) { return u * (1.0 + z); },
                     [cut](double z) { return z > cut; }, cut, m.lambda_R);
        }
    }
    return row;
}

JumpOperator assemble_jump_operator(const EquationSpec& spec, const Grid& grid) {
    const int n = grid.n();
    JumpOperator op{Eigen::MatrixXd::Zero(n, n), Eigen::VectorXd::Zero(n)};
    for (int i = 0; i < n; ++i) {
        const JumpRow row = jump_row(spec, grid, grid.node(i));
        for (const auto& [j, w] : row.weights) op.W(i, j) += w;
        op.offset(i) = row.offset;
    }
    return op;
}

}  // namespace jdrisk::detail
