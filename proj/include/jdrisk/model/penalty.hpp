#pragma once

#include <string>
#include <vector>

namespace jdrisk {

/// Penalty w(x1, x2) applied at ruin to (surplus before ruin, deficit at ruin).
/// Only evaluated on [0, inf)^2.
class Penalty {
public:
    enum class Form { one, deficit_power, deficit_indicator, table };

    /// w = 1: the Gerber-Shiu function reduces to the (discounted) ruin probability.
    static Penalty one();
    /// w = x2^k. Unbounded; bound() reports +inf.
    static Penalty deficit_power(int k);
    /// w = 1{x2 <= c}.
    static Penalty deficit_indicator(double c);
    /// Bilinear interpolation of a table given on the grid x1_nodes x x2_nodes
    /// (row-major, one row per x1 node), held constant outside the grid.
    static Penalty table(std::vector<double> x1_nodes, std::vector<double> x2_nodes,
                         std::vector<double> values);

    double operator()(double x1, double x2) const;
    double bound() const noexcept { return bound_; }
    Form form() const noexcept { return form_; }
    /// Deficit values at which w is not smooth in x2 (for quadrature breakpoints).
    std::vector<double> deficit_breaks() const;
    std::string describe() const;

private:
    explicit Penalty(Form f) : form_(f) {}

    Form form_;
    int power_ = 0;
    double cap_ = 0.0;
    std::vector<double> x1_, x2_, values_;
    double bound_ = 1.0;
};

}  // namespace jdrisk
