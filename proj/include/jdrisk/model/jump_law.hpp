#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "jdrisk/quadrature.hpp"

namespace jdrisk {

class RngStream;

/// Which jump a law describes: claims S_P (subtracted from the surplus) or
/// investment return jumps S_R (the surplus is multiplied by 1 + S_R).
enum class JumpRole { claim, ret };

/// One exponential branch of a two-sided mixture. `sign` = +1 gives a
/// positive jump with the given mean, -1 a negative one.
struct ExpComponent {
    double weight = 1.0;
    double mean = 1.0;
    int sign = +1;
};

/// A point of positive probability.
struct Atom {
    double value;
    double prob;
};

/// A jump-size distribution that can be sampled and integrated against.
///
/// Laws are immutable value types. Continuous families integrate by adaptive
/// quadrature over a support truncated where the tail mass drops below
/// `kTailMass`; discrete families sum over their atoms.
class JumpLaw {
public:
    enum class Family { exponential, mixed_exponential, normal, point_mass, shifted_lognormal, empirical };

    static constexpr double kTailMass = 1e-12;

    static JumpLaw exponential(double mean, JumpRole role = JumpRole::claim);
    static JumpLaw mixed_exponential(std::vector<ExpComponent> components,
                                     JumpRole role = JumpRole::claim);
    static JumpLaw normal(double mean, double sd, JumpRole role = JumpRole::claim);
    static JumpLaw point_mass(double value, JumpRole role = JumpRole::claim);
    /// 1 + Z is lognormal with log-mean `mu` and log-sd `sigma`.
    static JumpLaw shifted_lognormal(double mu, double sigma, JumpRole role = JumpRole::ret);
    /// Discrete law on `values` with probabilities proportional to `weights`.
    static JumpLaw empirical(std::vector<double> values, std::vector<double> weights,
                             JumpRole role = JumpRole::claim);

    Family family() const noexcept { return family_; }
    JumpRole role() const noexcept { return role_; }
    std::string describe() const;

    double sample(RngStream& rng) const;
    double cdf(double x) const;
    double mean() const;
    /// Raw moment E[Z^k].
    double moment(int k) const;
    /// E[exp(s Z)], or nullopt where it diverges.
    std::optional<double> mgf(double s) const;

    /// Density of the absolutely continuous part (zero for discrete laws).
    double density(double x) const;
    bool has_density() const noexcept { return family_ != Family::point_mass && family_ != Family::empirical; }
    std::span<const Atom> atoms() const noexcept { return atoms_; }

    /// Interval carrying all but `kTailMass` of the probability on each side.
    std::pair<double, double> effective_support() const noexcept { return support_; }
    /// Points where the density is not smooth (inside the effective support).
    std::span<const double> breakpoints() const noexcept { return breaks_; }
    /// Exact infimum of the support (may be -inf).
    double support_min() const noexcept { return support_min_; }

    /// E[f(Z)]. `extra_breaks` are points where f itself is not smooth.
    double expectation(const std::function<double(double)>& f,
                       std::span<const double> extra_breaks = {},
                       const quad::Options& opt = {}) const;

    /// P(a < Z <= b) and E[Z; a < Z <= b] in closed form. Either limit may be infinite.
    std::pair<double, double> partial_moments(double a, double b) const;

    /// E[(1 + Z)^(-s)]; meaningful for return laws.
    double power_moment(double s) const;
    /// E[log(1 + Z)]; meaningful for return laws.
    double log_moment() const;

private:
    JumpLaw(Family family, JumpRole role) : family_(family), role_(role) {}
    void finalize();

    Family family_;
    JumpRole role_;
    std::vector<ExpComponent> components_;  // exponential families
    double mu_ = 0.0, sigma_ = 0.0;         // normal / lognormal
    std::vector<Atom> atoms_;               // point mass / empirical
    std::vector<double> cumulative_;        // empirical sampling
    std::pair<double, double> support_{0.0, 0.0};
    std::vector<double> breaks_;
    double support_min_ = 0.0;
};

}  // namespace jdrisk
