#pragma once

#include <functional>
#include <string>
#include <vector>

namespace jdrisk {

/// Uniform nodes 0 = u_0 < ... < u_{n-1} = u_max.
class Grid {
public:
    Grid(double u_max, int n);

    double u_max() const noexcept { return u_max_; }
    int n() const noexcept { return n_; }
    double h() const noexcept { return h_; }
    double node(int i) const noexcept { return i == n_ - 1 ? u_max_ : i * h_; }
    std::vector<double> nodes() const;
    /// Index of the node nearest to u (clamped to the grid).
    int nearest(double u) const noexcept;

private:
    double u_max_;
    int n_;
    double h_;
};

/// How a grid solution continues to the right of u_max. The extension is
/// affine in the last nodal value: ext(v) = c0(v) + c1(v) h_last for v >= u_max.
/// A Dirichlet far field pins h_last to c0(u_max); a derivative far field
/// imposes h'(u_max) = d0 + d1 h_last instead.
struct FarField {
    enum class Kind { dirichlet, derivative };

    Kind kind = Kind::dirichlet;
    double asymptote = 0.0;  ///< limit at infinity
    double value = 0.0;      ///< h_last for the Dirichlet kind
    std::function<double(double)> c0;
    std::function<double(double)> c1;
    double d0 = 0.0;
    double d1 = 0.0;
    std::string description;

    /// Value `a` everywhere beyond u_max, which is also the boundary value.
    static FarField constant(double a);

    double extend(double v, double h_last) const;
};

/// A function tabulated on a grid: linear interpolation between nodes and the
/// far-field extension beyond u_max.
class GridFunction {
public:
    GridFunction(Grid grid, std::vector<double> values, FarField far);

    const Grid& grid() const noexcept { return grid_; }
    const std::vector<double>& values() const noexcept { return values_; }
    const FarField& far_field() const noexcept { return far_; }
    double asymptote() const noexcept { return far_.asymptote; }

    /// Throws InvalidArgument for u < 0.
    double operator()(double u) const;

private:
    Grid grid_;
    std::vector<double> values_;
    FarField far_;
};

}  // namespace jdrisk
