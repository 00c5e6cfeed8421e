#include "jdrisk/idesolver/far_field.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "jdrisk/errors.hpp"

namespace jdrisk {

namespace {

constexpr int kMaxMoment = 16;
constexpr int kMaxTerms = 16;
constexpr double kScanStart = 1e-6;
constexpr double kScanFactor = 1.05;
constexpr double kScanEnd = 200.0;

double rising(double s, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= s + i;
    return r;
}

// Smallest positive root of f, located by a geometric scan for a sign change
// from negative to positive and refined by TOMS 748. f must be negative just
// above zero. Returns nullopt if no such root is found.
template <class F>
std::optional<double> first_positive_root(F f, double stop) {
    double lo = kScanStart;
    double flo = f(lo);
    if (!std::isfinite(flo) || flo >= 0) return std::nullopt;
    for (double hi = lo * kScanFactor; hi <= stop; hi *= kScanFactor) {
        const double fhi = f(hi);
        if (!std::isfinite(fhi)) return std::nullopt;
        if (fhi >= 0) {
            std::uintmax_t iters = 200;
            auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi,
                                                       boost::math::tools::eps_tolerance<double>(50), iters);
            return 0.5 * (r.first + r.second);
        }
        lo = hi;
        flo = fhi;
    }
    return std::nullopt;
}

// Number of series terms to keep at u: up to the smallest term.
std::size_t truncation(const std::vector<double>& c, double u) {
    std::size_t keep = 1;
    double last = std::abs(c[0]);
    for (std::size_t j = 1; j < c.size(); ++j) {
        const double term = std::abs(c[j]) * std::pow(u, -static_cast<double>(j));
        if (term > last && term > 0) break;
        keep = j + 1;
        last = term;
        if (term < 1e-17 * std::abs(c[0])) break;
    }
    return keep;
}

std::vector<double> power_series(const TailOperator& op, double gamma, const std::vector<double>& forcing,
                                 double factor, bool homogeneous, double u_max) {
    std::vector<double> d;
    for (int n = 0; n < kMaxTerms; ++n) {
        double acc = n < static_cast<int>(forcing.size()) ? -factor * forcing[static_cast<std::size_t>(n)] : 0.0;
        for (int i = 0; i < n; ++i) acc -= d[static_cast<std::size_t>(i)] * op.T(n - i, gamma + i);
        if (homogeneous && n == 0) {
            d.push_back(1.0);
            continue;
        }
        const double p = op.P(gamma + n);
        if (std::abs(p) < 1e-12) {
            if (n == 0 || !homogeneous) {
                std::ostringstream os;
                os << "far field: resonant power " << gamma + n << " in the tail expansion";
                throw NumericError(os.str(), std::abs(p));
            }
            break;
        }
        d.push_back(acc / p);
    }
    d.resize(truncation(d, u_max));
    return d;
}

}  // namespace

TailOperator TailOperator::from(const RiskParams& m, const JumpLaw& claim_law, const JumpLaw& return_law,
                                double discount, double drift_reduction) {
    TailOperator op;
    op.a0 = 0.5 * m.sigma_P * m.sigma_P;
    op.a1 = m.rho * m.sigma_P * m.sigma_R;
    op.a2 = 0.5 * m.sigma_R * m.sigma_R;
    op.b0 = m.p - drift_reduction;
    op.b1 = m.r;
    op.discount = discount;
    op.lambda_P = m.lambda_P;
    op.lambda_R = m.lambda_R;
    if (m.lambda_P > 0) {
        op.claim_law = claim_law;
        for (int k = 0; k <= kMaxMoment; ++k) op.claim_moments.push_back(claim_law.moment(k));
    }
    if (m.lambda_R > 0) op.return_law = return_law;
    return op;
}

double TailOperator::P(double s) const {
    double v = a2 * s * (s + 1.0) - b1 * s - discount;
    if (lambda_R > 0) v += lambda_R * (return_law->power_moment(s) - 1.0);
    return v;
}

double TailOperator::T(int k, double s) const {
    if (k == 0) return P(s);
    auto mk = [&](int j) {
        return lambda_P > 0 && j < static_cast<int>(claim_moments.size()) ? claim_moments[static_cast<std::size_t>(j)] : 0.0;
    };
    if (k == 1) return a1 * s * (s + 1.0) - b0 * s + lambda_P * mk(1) * s;
    if (k == 2) return a0 * s * (s + 1.0) + lambda_P * mk(2) * s * (s + 1.0) / 2.0;
    double fact = 1.0;
    for (int i = 2; i <= k; ++i) fact *= i;
    return lambda_P * mk(k) * rising(s, k) / fact;
}

double TailOperator::exp_symbol(double R) const {
    double v = a0 * R * R - b0 * R - discount;
    if (lambda_P > 0) {
        const auto mgf = claim_law->mgf(R);
        if (!mgf) return std::numeric_limits<double>::quiet_NaN();
        v += lambda_P * (*mgf - 1.0);
    }
    return v;
}

double TailFamily::value(double u) const {
    if (kind == Kind::exponential) return coef[0] * std::exp(-rate * u);
    double v = 0.0;
    for (std::size_t j = 0; j < coef.size(); ++j) v += coef[j] * std::pow(u, -rate - static_cast<double>(j));
    return v;
}

double TailFamily::slope(double u) const {
    if (kind == Kind::exponential) return -rate * coef[0] * std::exp(-rate * u);
    double v = 0.0;
    for (std::size_t j = 0; j < coef.size(); ++j) {
        const double e = rate + static_cast<double>(j);
        v -= e * coef[j] * std::pow(u, -e - 1.0);
    }
    return v;
}

TailFamily TailFamily::scaled(double factor) const {
    TailFamily f = *this;
    for (double& c : f.coef) c *= factor;
    return f;
}

std::optional<TailFamily> homogeneous_tail(const TailOperator& op, double u_max) {
    TailFamily fam;
    if (op.exponential_regime()) {
        const auto R = first_positive_root([&](double x) { return op.exp_symbol(x); }, 1e3);
        if (!R) return std::nullopt;
        fam.kind = TailFamily::Kind::exponential;
        fam.rate = *R;
        fam.coef = {1.0};
        return fam;
    }
    const auto gamma = first_positive_root([&](double s) { return op.P(s); }, kScanEnd);
    if (!gamma) return std::nullopt;
    fam.kind = TailFamily::Kind::power;
    fam.rate = *gamma;
    fam.coef = power_series(op, *gamma, {}, 0.0, true, u_max);
    return fam;
}

TailFamily forced_tail(const TailOperator& op, const TailFamily& source, double factor, double u_max) {
    TailFamily fam = source;
    if (source.kind == TailFamily::Kind::exponential) {
        const double sym = op.exp_symbol(source.rate);
        if (!(std::abs(sym) > 1e-12)) throw NumericError("far field: resonant exponential forcing", sym);
        fam.coef = {-factor * source.coef[0] / sym};
        return fam;
    }
    fam.coef = power_series(op, source.rate, source.coef, factor, false, u_max);
    return fam;
}

FarField TailModel::far_field(double u_max) const {
    FarField f;
    f.asymptote = asymptote;
    const double A = asymptote;
    const auto forced_copy = forced;
    auto F = [forced_copy](double v) {
        double s = 0.0;
        for (const auto& fam : forced_copy) s += fam.value(v);
        return s;
    };
    double Fp = 0.0;
    for (const auto& fam : forced) Fp += fam.slope(u_max);
    f.description = describe();
    if (!homogeneous) {
        f.kind = FarField::Kind::dirichlet;
        f.value = A + F(u_max);
        f.c0 = [A, F](double v) { return A + F(v); };
        f.c1 = [](double) { return 0.0; };
        return f;
    }
    const TailFamily S = *homogeneous;
    const double Sm = S.value(u_max);
    const double base = A + F(u_max);
    f.kind = FarField::Kind::derivative;
    f.c1 = [S, Sm](double v) { return S.value(v) / Sm; };
    f.c0 = [A, F, S, Sm, base](double v) { return A + F(v) - base * S.value(v) / Sm; };
    f.d1 = S.slope(u_max) / Sm;
    f.d0 = Fp - base * f.d1;
    return f;
}

std::vector<TailFamily> TailModel::families(double h_last, double u_max) const {
    std::vector<TailFamily> out = forced;
    if (homogeneous) {
        double F = 0.0;
        for (const auto& fam : forced) F += fam.value(u_max);
        out.push_back(homogeneous->scaled((h_last - asymptote - F) / homogeneous->value(u_max)));
    }
    return out;
}

std::string TailModel::describe() const {
    std::ostringstream os;
    os.precision(6);
    os << "asymptote " << asymptote;
    auto name = [&](const TailFamily& f) {
        if (f.kind == TailFamily::Kind::exponential) os << "exp(-" << f.rate << " u)";
        else os << "u^-" << f.rate << " (" << f.coef.size() << " terms)";
    };
    for (const auto& f : forced) {
        os << " + forced ";
        name(f);
    }
    if (homogeneous) {
        os << " + free ";
        name(*homogeneous);
    } else {
        os << " (Dirichlet)";
    }
    return os.str();
}

TailModel make_tail_model(const TailOperator& op, double asymptote, double u_max,
                          const std::vector<TailFamily>& forcing, double factor) {
    TailModel model;
    model.asymptote = asymptote;
    for (const auto& src : forcing) model.forced.push_back(forced_tail(op, src, factor, u_max));
    model.homogeneous = homogeneous_tail(op, u_max);
    return model;
}

}  // namespace jdrisk
