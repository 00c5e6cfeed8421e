#include "jdrisk/idesolver/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "jdrisk/errors.hpp"

namespace jdrisk {

Grid::Grid(double u_max, int n) : u_max_(u_max), n_(n), h_(0.0) {
    JDRISK_REQUIRE(n >= 3, "Grid: at least 3 nodes required");
    JDRISK_REQUIRE(u_max > 0 && std::isfinite(u_max), "Grid: u_max must be positive and finite");
    h_ = u_max / (n - 1);
}

std::vector<double> Grid::nodes() const {
    std::vector<double> x(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) x[static_cast<std::size_t>(i)] = node(i);
    return x;
}

int Grid::nearest(double u) const noexcept {
    const double k = std::round(u / h_);
    return static_cast<int>(std::clamp(k, 0.0, static_cast<double>(n_ - 1)));
}

FarField FarField::constant(double a) {
    FarField f;
    f.kind = Kind::dirichlet;
    f.asymptote = a;
    f.value = a;
    f.c0 = [a](double) { return a; };
    f.c1 = [](double) { return 0.0; };
    std::ostringstream os;
    os << "constant " << a;
    f.description = os.str();
    return f;
}

double FarField::extend(double v, double h_last) const { return c0(v) + c1(v) * h_last; }

GridFunction::GridFunction(Grid grid, std::vector<double> values, FarField far)
    : grid_(grid), values_(std::move(values)), far_(std::move(far)) {
    JDRISK_REQUIRE(static_cast<int>(values_.size()) == grid_.n(), "GridFunction: one value per node required");
}

double GridFunction::operator()(double u) const {
    JDRISK_REQUIRE(u >= 0, "GridFunction: evaluation below 0");
    if (u > grid_.u_max()) return far_.extend(u, values_.back());
    const double s = u / grid_.h();
    const int i = std::min(static_cast<int>(s), grid_.n() - 2);
    const double t = s - i;
    return (1.0 - t) * values_[static_cast<std::size_t>(i)] + t * values_[static_cast<std::size_t>(i) + 1];
}

}  // namespace jdrisk
