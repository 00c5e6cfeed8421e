#include "jdrisk/model/penalty.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "jdrisk/errors.hpp"

namespace jdrisk {

namespace {

// Bracketing index and weight of x on sorted nodes, clamped to the ends.
std::pair<std::size_t, double> locate(const std::vector<double>& nodes, double x) {
    if (nodes.size() == 1 || x <= nodes.front()) return {0, 0.0};
    if (x >= nodes.back()) return {nodes.size() - 2, 1.0};
    auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - nodes.begin()) - 1;
    return {i, (x - nodes[i]) / (nodes[i + 1] - nodes[i])};
}

}  // namespace

Penalty Penalty::one() { return Penalty(Form::one); }

Penalty Penalty::deficit_power(int k) {
    JDRISK_REQUIRE(k >= 0, "deficit_power penalty: exponent must be nonnegative");
    Penalty w(Form::deficit_power);
    w.power_ = k;
    w.bound_ = k == 0 ? 1.0 : std::numeric_limits<double>::infinity();
    return w;
}

Penalty Penalty::deficit_indicator(double c) {
    JDRISK_REQUIRE(c >= 0, "deficit_indicator penalty: threshold must be nonnegative");
    Penalty w(Form::deficit_indicator);
    w.cap_ = c;
    return w;
}

Penalty Penalty::table(std::vector<double> x1_nodes, std::vector<double> x2_nodes,
                       std::vector<double> values) {
    JDRISK_REQUIRE(!x1_nodes.empty() && !x2_nodes.empty(), "table penalty: empty grid");
    JDRISK_REQUIRE(values.size() == x1_nodes.size() * x2_nodes.size(),
                   "table penalty: values must have |x1| * |x2| entries");
    JDRISK_REQUIRE(std::is_sorted(x1_nodes.begin(), x1_nodes.end()) &&
                       std::is_sorted(x2_nodes.begin(), x2_nodes.end()),
                   "table penalty: grid nodes must be increasing");
    for (double v : values)
        JDRISK_REQUIRE(v >= 0 && std::isfinite(v), "table penalty: values must be finite and nonnegative");
    Penalty w(Form::table);
    w.bound_ = *std::max_element(values.begin(), values.end());
    w.x1_ = std::move(x1_nodes);
    w.x2_ = std::move(x2_nodes);
    w.values_ = std::move(values);
    return w;
}

double Penalty::operator()(double x1, double x2) const {
    switch (form_) {
        case Form::one: return 1.0;
        case Form::deficit_power: return power_ == 0 ? 1.0 : std::pow(x2, power_);
        case Form::deficit_indicator: return x2 <= cap_ ? 1.0 : 0.0;
        case Form::table: {
            const auto [i, a] = locate(x1_, x1);
            const auto [j, b] = locate(x2_, x2);
            const std::size_t n2 = x2_.size();
            auto at = [&](std::size_t ii, std::size_t jj) {
                return values_[std::min(ii, x1_.size() - 1) * n2 + std::min(jj, n2 - 1)];
            };
            return (1 - a) * ((1 - b) * at(i, j) + b * at(i, j + 1)) +
                   a * ((1 - b) * at(i + 1, j) + b * at(i + 1, j + 1));
        }
    }
    return 0.0;
}

std::vector<double> Penalty::deficit_breaks() const {
    if (form_ == Form::deficit_indicator) return {cap_};
    if (form_ == Form::table) return x2_;
    return {};
}

std::string Penalty::describe() const {
    std::ostringstream os;
    switch (form_) {
        case Form::one: os << "one"; break;
        case Form::deficit_power: os << "deficit_power(k=" << power_ << ")"; break;
        case Form::deficit_indicator: os << "deficit_indicator(c=" << cap_ << ")"; break;
        case Form::table: os << "table(" << x1_.size() << "x" << x2_.size() << ")"; break;
    }
    return os.str();
}

}  // namespace jdrisk
