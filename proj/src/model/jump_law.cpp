#include "jdrisk/model/jump_law.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "jdrisk/errors.hpp"
#include "jdrisk/rng.hpp"

namespace jdrisk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Standard normal quantile at JumpLaw::kTailMass.
constexpr double kNormalTailZ = 7.034483825301131;

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

// Phi(b) - Phi(a), evaluated in whichever tail keeps precision.
double normal_interval(double a, double b) {
    if (!(b > a)) return 0.0;
    if (a > 0) return normal_cdf(-a) - normal_cdf(-b);
    return normal_cdf(b) - normal_cdf(a);
}

// Mass and first moment of Exp(mean m) on [y1, y2), 0 <= y1.
std::pair<double, double> exp_piece(double m, double y1, double y2) {
    if (!(y2 > y1)) return {0.0, 0.0};
    const double e1 = std::exp(-y1 / m);
    const double e2 = std::isfinite(y2) ? std::exp(-y2 / m) : 0.0;
    const double t2 = std::isfinite(y2) ? (y2 + m) * e2 : 0.0;
    return {e1 - e2, (y1 + m) * e1 - t2};
}

double binomial(int n, int k) {
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c;
}

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

// E[N^j] for standard normal N.
double std_normal_moment(int j) {
    if (j % 2) return 0.0;
    double m = 1.0;
    for (int i = j - 1; i > 0; i -= 2) m *= i;
    return m;
}

}  // namespace

JumpLaw JumpLaw::exponential(double mean, JumpRole role) {
    JDRISK_REQUIRE(mean > 0 && std::isfinite(mean), "exponential law: mean must be positive");
    JumpLaw law(Family::exponential, role);
    law.components_ = {{1.0, mean, +1}};
    law.finalize();
    return law;
}

JumpLaw JumpLaw::mixed_exponential(std::vector<ExpComponent> components, JumpRole role) {
    JDRISK_REQUIRE(!components.empty(), "mixed exponential law: no components");
    double total = 0.0;
    for (const auto& c : components) {
        JDRISK_REQUIRE(c.weight > 0 && c.mean > 0, "mixed exponential law: weights and means must be positive");
        JDRISK_REQUIRE(c.sign == 1 || c.sign == -1, "mixed exponential law: sign must be +1 or -1");
        total += c.weight;
    }
    for (auto& c : components) c.weight /= total;
    JumpLaw law(Family::mixed_exponential, role);
    law.components_ = std::move(components);
    law.finalize();
    return law;
}

JumpLaw JumpLaw::normal(double mean, double sd, JumpRole role) {
    JDRISK_REQUIRE(sd > 0 && std::isfinite(mean), "normal law: sd must be positive");
    JumpLaw law(Family::normal, role);
    law.mu_ = mean;
    law.sigma_ = sd;
    law.finalize();
    return law;
}

JumpLaw JumpLaw::point_mass(double value, JumpRole role) {
    JDRISK_REQUIRE(std::isfinite(value), "point mass: value must be finite");
    JumpLaw law(Family::point_mass, role);
    law.atoms_ = {{value, 1.0}};
    law.finalize();
    return law;
}

JumpLaw JumpLaw::shifted_lognormal(double mu, double sigma, JumpRole role) {
    JDRISK_REQUIRE(sigma > 0 && std::isfinite(mu), "shifted lognormal law: sigma must be positive");
    JumpLaw law(Family::shifted_lognormal, role);
    law.mu_ = mu;
    law.sigma_ = sigma;
    law.finalize();
    return law;
}

JumpLaw JumpLaw::empirical(std::vector<double> values, std::vector<double> weights, JumpRole role) {
    JDRISK_REQUIRE(!values.empty() && values.size() == weights.size(),
                   "empirical law: values and weights must be non-empty and of equal length");
    double total = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        JDRISK_REQUIRE(std::isfinite(values[i]) && weights[i] >= 0, "empirical law: bad entry");
        total += weights[i];
    }
    JDRISK_REQUIRE(total > 0, "empirical law: weights sum to zero");
    JumpLaw law(Family::empirical, role);
    for (std::size_t i = 0; i < values.size(); ++i)
        if (weights[i] > 0) law.atoms_.push_back({values[i], weights[i] / total});
    std::sort(law.atoms_.begin(), law.atoms_.end(),
              [](const Atom& a, const Atom& b) { return a.value < b.value; });
    law.finalize();
    return law;
}

void JumpLaw::finalize() {
    switch (family_) {
        case Family::exponential:
        case Family::mixed_exponential: {
            double lo = 0.0, hi = 0.0;
            support_min_ = 0.0;
            const double tail = std::log(1.0 / kTailMass);
            for (const auto& c : components_) {
                if (c.sign > 0) hi = std::max(hi, c.mean * tail);
                else {
                    lo = std::min(lo, -c.mean * tail);
                    support_min_ = -kInf;
                }
            }
            support_ = {lo, hi};
            if (lo < 0 && hi > 0) breaks_ = {0.0};
            break;
        }
        case Family::normal:
            support_ = {mu_ - kNormalTailZ * sigma_, mu_ + kNormalTailZ * sigma_};
            support_min_ = -kInf;
            break;
        case Family::shifted_lognormal:
            support_ = {std::exp(mu_ - kNormalTailZ * sigma_) - 1.0,
                        std::exp(mu_ + kNormalTailZ * sigma_) - 1.0};
            support_min_ = -1.0;
            break;
        case Family::point_mass:
        case Family::empirical:
            support_ = {atoms_.front().value, atoms_.back().value};
            support_min_ = atoms_.front().value;
            cumulative_.clear();
            {
                double acc = 0.0;
                for (const auto& a : atoms_) cumulative_.push_back(acc += a.prob);
                cumulative_.back() = 1.0;
            }
            break;
    }
}

std::string JumpLaw::describe() const {
    std::ostringstream os;
    os.precision(17);
    switch (family_) {
        case Family::exponential: os << "exponential(mean=" << components_[0].mean << ")"; break;
        case Family::mixed_exponential:
            os << "mixed_exponential(";
            for (std::size_t i = 0; i < components_.size(); ++i) {
                const auto& c = components_[i];
                os << (i ? ", " : "") << c.weight << "*" << (c.sign > 0 ? "+" : "-") << "Exp(" << c.mean << ")";
            }
            os << ")";
            break;
        case Family::normal: os << "normal(mean=" << mu_ << ", sd=" << sigma_ << ")"; break;
        case Family::point_mass: os << "point_mass(" << atoms_[0].value << ")"; break;
        case Family::shifted_lognormal: os << "shifted_lognormal(mu=" << mu_ << ", sigma=" << sigma_ << ")"; break;
        case Family::empirical: os << "empirical(" << atoms_.size() << " atoms)"; break;
    }
    return os.str();
}

double JumpLaw::sample(RngStream& rng) const {
    switch (family_) {
        case Family::exponential: return components_[0].mean * -std::log(rng.uniform());
        case Family::mixed_exponential: {
            double v = rng.uniform();
            const ExpComponent* chosen = &components_.back();
            for (const auto& c : components_) {
                if (v < c.weight) { chosen = &c; break; }
                v -= c.weight;
            }
            return chosen->sign * chosen->mean * -std::log(rng.uniform());
        }
        case Family::normal: return mu_ + sigma_ * rng.normal();
        case Family::shifted_lognormal: return std::exp(mu_ + sigma_ * rng.normal()) - 1.0;
        case Family::point_mass: return atoms_[0].value;
        case Family::empirical: {
            const double v = rng.uniform();
            auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), v);
            if (it == cumulative_.end()) --it;
            return atoms_[static_cast<std::size_t>(it - cumulative_.begin())].value;
        }
    }
    return 0.0;
}

double JumpLaw::cdf(double x) const {
    switch (family_) {
        case Family::exponential:
        case Family::mixed_exponential: {
            double F = 0.0;
            for (const auto& c : components_) {
                if (c.sign > 0) F += x >= 0 ? c.weight * -std::expm1(-x / c.mean) : 0.0;
                else F += x < 0 ? c.weight * std::exp(x / c.mean) : c.weight;
            }
            return std::clamp(F, 0.0, 1.0);
        }
        case Family::normal: return normal_cdf((x - mu_) / sigma_);
        case Family::shifted_lognormal:
            return x <= -1.0 ? 0.0 : normal_cdf((std::log1p(x) - mu_) / sigma_);
        case Family::point_mass:
        case Family::empirical: {
            double F = 0.0;
            for (const auto& a : atoms_)
                if (a.value <= x) F += a.prob;
            return std::min(F, 1.0);
        }
    }
    return 0.0;
}

double JumpLaw::density(double x) const {
    switch (family_) {
        case Family::exponential:
        case Family::mixed_exponential: {
            double f = 0.0;
            for (const auto& c : components_) {
                const double y = c.sign * x;
                if (y >= 0) f += c.weight * std::exp(-y / c.mean) / c.mean;
            }
            return f;
        }
        case Family::normal: {
            const double z = (x - mu_) / sigma_;
            return std::exp(-0.5 * z * z) / (sigma_ * std::sqrt(2.0 * std::numbers::pi));
        }
        case Family::shifted_lognormal: {
            if (x <= -1.0) return 0.0;
            const double y = 1.0 + x;
            const double z = (std::log(y) - mu_) / sigma_;
            return std::exp(-0.5 * z * z) / (y * sigma_ * std::sqrt(2.0 * std::numbers::pi));
        }
        case Family::point_mass:
        case Family::empirical: return 0.0;
    }
    return 0.0;
}

double JumpLaw::mean() const { return moment(1); }

double JumpLaw::moment(int k) const {
    JDRISK_REQUIRE(k >= 0, "moment: order must be nonnegative");
    if (k == 0) return 1.0;
    switch (family_) {
        case Family::exponential:
        case Family::mixed_exponential: {
            double m = 0.0;
            for (const auto& c : components_)
                m += c.weight * ((k % 2 && c.sign < 0) ? -1.0 : 1.0) * factorial(k) * std::pow(c.mean, k);
            return m;
        }
        case Family::normal: {
            double m = 0.0;
            for (int j = 0; j <= k; ++j)
                m += binomial(k, j) * std::pow(mu_, k - j) * std::pow(sigma_, j) * std_normal_moment(j);
            return m;
        }
        case Family::shifted_lognormal: {
            // E[(Y - 1)^k] with Y lognormal, E[Y^j] = exp(j mu + j^2 sigma^2 / 2).
            double m = 0.0;
            for (int j = 0; j <= k; ++j)
                m += binomial(k, j) * (((k - j) % 2) ? -1.0 : 1.0) *
                     std::exp(j * mu_ + 0.5 * j * j * sigma_ * sigma_);
            return m;
        }
        case Family::point_mass:
        case Family::empirical: {
            double m = 0.0;
            for (const auto& a : atoms_) m += a.prob * std::pow(a.value, k);
            return m;
        }
    }
    return 0.0;
}

std::optional<double> JumpLaw::mgf(double s) const {
    switch (family_) {
        case Family::exponential:
        case Family::mixed_exponential: {
            double m = 0.0;
            for (const auto& c : components_) {
                const double t = c.sign * s * c.mean;
                if (t >= 1.0) return std::nullopt;
                m += c.weight / (1.0 - t);
            }
            return m;
        }
        case Family::normal: return std::exp(mu_ * s + 0.5 * sigma_ * sigma_ * s * s);
        case Family::shifted_lognormal: {
            if (s > 0) return std::nullopt;
            return expectation([s](double z) { return std::exp(s * z); });
        }
        case Family::point_mass:
        case Family::empirical: {
            double m = 0.0;
            for (const auto& a : atoms_) m += a.prob * std::exp(s * a.value);
            return m;
        }
    }
    return std::nullopt;
}

double JumpLaw::expectation(const std::function<double(double)>& f,
                            std::span<const double> extra_breaks, const quad::Options& opt) const {
    double total = 0.0;
    for (const auto& a : atoms_) total += a.prob * f(a.value);
    if (!has_density()) return total;
    std::vector<double> cuts(breaks_.begin(), breaks_.end());
    cuts.insert(cuts.end(), extra_breaks.begin(), extra_breaks.end());
    auto integrand = [&](double z) { return density(z) * f(z); };
    total += quad::adaptive(integrand, support_.first, support_.second, cuts, opt).value;
    return total;
}

std::pair<double, double> JumpLaw::partial_moments(double a, double b) const {
    if (!(b > a)) return {0.0, 0.0};
    switch (family_) {
        case Family::exponential:
        case Family::mixed_exponential: {
            double mass = 0.0, first = 0.0;
            for (const auto& c : components_) {
                if (c.sign > 0) {
                    const auto [pm, pf] = exp_piece(c.mean, std::max(a, 0.0), std::max(b, 0.0));
                    mass += c.weight * pm;
                    first += c.weight * pf;
                } else {
                    // Z = -Y with Y >= 0: a < Z <= b  <=>  -b <= Y < -a.
                    const auto [pm, pf] = exp_piece(c.mean, std::max(-b, 0.0), std::max(-a, 0.0));
                    mass += c.weight * pm;
                    first -= c.weight * pf;
                }
            }
            return {mass, first};
        }
        case Family::normal: {
            const double za = (a - mu_) / sigma_, zb = (b - mu_) / sigma_;
            const double mass = normal_interval(za, zb);
            const double pa = std::isfinite(za) ? normal_pdf(za) : 0.0;
            const double pb = std::isfinite(zb) ? normal_pdf(zb) : 0.0;
            return {mass, mu_ * mass + sigma_ * (pa - pb)};
        }
        case Family::shifted_lognormal: {
            if (b <= -1.0) return {0.0, 0.0};
            const double la = a <= -1.0 ? -kInf : (std::log1p(a) - mu_) / sigma_;
            const double lb = std::isfinite(b) ? (std::log1p(b) - mu_) / sigma_ : kInf;
            const double mass = normal_interval(la, lb);
            const double ey = std::exp(mu_ + 0.5 * sigma_ * sigma_) * normal_interval(la - sigma_, lb - sigma_);
            return {mass, ey - mass};
        }
        case Family::point_mass:
        case Family::empirical: {
            double mass = 0.0, first = 0.0;
            for (const auto& at : atoms_)
                if (at.value > a && at.value <= b) {
                    mass += at.prob;
                    first += at.prob * at.value;
                }
            return {mass, first};
        }
    }
    return {0.0, 0.0};
}

double JumpLaw::power_moment(double s) const {
    if (family_ == Family::shifted_lognormal) return std::exp(-s * mu_ + 0.5 * s * s * sigma_ * sigma_);
    JDRISK_REQUIRE(support_min_ > -1.0, "power_moment: law puts mass at or below -1");
    return expectation([s](double z) { return std::pow(1.0 + z, -s); });
}

double JumpLaw::log_moment() const {
    if (family_ == Family::shifted_lognormal) return mu_;
    JDRISK_REQUIRE(support_min_ > -1.0, "log_moment: law puts mass at or below -1");
    return expectation([](double z) { return std::log1p(z); });
}

}  // namespace jdrisk
