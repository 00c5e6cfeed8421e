#include "jdrisk/specialfn/closed_forms.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "jdrisk/errors.hpp"
#include "jdrisk/quadrature.hpp"

namespace jdrisk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMaxCondition = 1e14;
constexpr double kPrintedTol = 1e-6;

void require_no_jumps(const RiskParams& m, const char* who) {
    m.validate();
    if (m.lambda_P != 0 || m.lambda_R != 0)
        throw InvalidArgument(std::string(who) + ": closed forms require lambda_P = lambda_R = 0");
}

void require_de_regime(const RiskParams& m, const char* who) {
    require_no_jumps(m, who);
    JDRISK_REQUIRE(m.rho * m.rho < 1.0, std::string(who) + ": requires rho^2 < 1");
    JDRISK_REQUIRE(m.sigma_P > 0 && m.sigma_R > 0, std::string(who) + ": requires sigma_P, sigma_R > 0");
}

struct DEJet {
    double D[3];
    double E[3];
};

// D and E at orders a + 1, a, a - 1 and their x-derivatives via the
// lowering identities. Second derivatives need a > 0.
DEJet de_jet(double x, double a, const DEParams& p) {
    const DEValue v1 = eval_DE(x, a + 1.0, p);
    const DEValue v0 = eval_DE(x, a, p);
    DEJet j{{v1.D, -(a + 1) * v0.D, 0.0}, {v1.E, (a + 1) * v0.E, 0.0}};
    if (a > 0) {
        const DEValue vm = eval_DE(x, a - 1.0, p);
        j.D[2] = (a + 1) * a * vm.D;
        j.E[2] = (a + 1) * a * vm.E;
    } else {
        const double h = 1e-4 * std::max(1.0, std::abs(x));
        const DEValue hi = eval_DE(x + h, a, p), lo = eval_DE(x - h, a, p);
        j.D[2] = -(a + 1) * (hi.D - lo.D) / (2 * h);
        j.E[2] = (a + 1) * (hi.E - lo.E) / (2 * h);
    }
    return j;
}

bool differs(double solved, double printed) {
    return std::abs(solved - printed) > kPrintedTol * std::max(std::abs(solved), 1e-300);
}

// Integrand of K at y = v + sigma_P/sigma_R, up to a constant factor.
struct KIntegrand {
    double k, q, s2, y0, shift;

    explicit KIntegrand(const RiskParams& m) {
        require_no_jumps(m, "eval_K");
        JDRISK_REQUIRE(m.rho == 1.0, "eval_K: closed form supports rho = +1 only");
        JDRISK_REQUIRE(m.delta == 0.0, "eval_K: requires delta = 0");
        JDRISK_REQUIRE(m.sigma_P > 0 && m.sigma_R > 0, "eval_K: requires sigma_P, sigma_R > 0");
        JDRISK_REQUIRE(m.r - 0.5 * m.sigma_R * m.sigma_R > 0,
                       "eval_K: requires r - sigma_R^2/2 > 0 (otherwise K(inf) diverges and ruin is certain)");
        s2 = m.sigma_R * m.sigma_R;
        k = 2.0 * m.r / s2;
        y0 = m.sigma_P / m.sigma_R;
        q = m.p - m.r * y0;
        shift = q > 0 ? 2.0 * q / (s2 * y0) : 0.0;
    }

    double operator()(double y) const { return std::exp(-k * std::log(y) + 2.0 * q / (s2 * y) - shift); }
    double slope(double y) const { return (*this)(y) * (-k / y - 2.0 * q / (s2 * y * y)); }

    // int_{y0+u}^inf f(y) dy with y = (y0 + u)/w.
    double tail(double u) const {
        const double Y = y0 + u;
        quad::Options opt;
        opt.rel_tol = 1e-13;
        opt.fail_rel = 1e-10;
        auto g = [&](double, double w, double) {
            return std::exp((k - 2.0) * std::log(w) + 2.0 * q * w / (s2 * Y) - shift);
        };
        return std::exp((1.0 - k) * std::log(Y)) * quad::endpoint_singular(g, 0.0, 1.0, opt).value;
    }
};

}  // namespace

double eval_K(double u, const RiskParams& params) {
    const KIntegrand f(params);
    JDRISK_REQUIRE(u >= 0, "eval_K: u must be nonnegative");
    if (u == kInf) return f.tail(0.0);
    quad::Options opt;
    opt.rel_tol = 1e-13;
    opt.fail_rel = 1e-10;
    return quad::adaptive([&](double v) { return f(f.y0 + v); }, 0.0, u, opt).value;
}

double closed_ruin_rho1(double u, const RiskParams& params) { return closed_ruin_rho1_jet(u, params).value; }

Jet closed_ruin_rho1_jet(double u, const RiskParams& params) {
    const KIntegrand f(params);
    JDRISK_REQUIRE(u >= 0, "closed_ruin_rho1: u must be nonnegative");
    if (u == kInf) return {0.0, 0.0, 0.0};
    const double total = f.tail(0.0);
    const double y = f.y0 + u;
    return {f.tail(u) / total, -f(y) / total, -f.slope(y) / total};
}

GerberNoJumps::GerberNoJumps(const RiskParams& params) {
    require_de_regime(params, "closed_gerber_no_jumps");
    JDRISK_REQUIRE(params.delta > params.r, "closed_gerber_no_jumps: requires delta > r");
    de_ = DEParams::from_model(params);
    ab_ = de_.exponents();
    scale_ = eval_DE(de_.shift(), ab_.alpha + 1.0, de_).D;
}

Jet GerberNoJumps::jet(double u) const {
    JDRISK_REQUIRE(u >= 0, "closed_gerber_no_jumps: u must be nonnegative");
    if (u == kInf) return {0.0, 0.0, 0.0};
    const DEJet j = de_jet(u + de_.shift(), ab_.alpha, de_);
    return {j.D[0] / scale_, j.D[1] / scale_, j.D[2] / scale_};
}

double closed_gerber_no_jumps(double u, const RiskParams& params) { return GerberNoJumps(params)(u); }

ThresholdClosedForm::ThresholdClosedForm(const RiskParams& params, double b, double mu)
    : b_(b), mu_(mu), delta_(params.delta) {
    require_de_regime(params, "closed_threshold_value");
    JDRISK_REQUIRE(params.delta > params.r, "closed_threshold_value: requires delta > r");
    JDRISK_REQUIRE(b > 0 && mu > 0, "closed_threshold_value: requires b > 0 and mu > 0");
    lower_ = DEParams::from_model(params);
    upper_ = DEParams::from_model(params, mu);
    ab_ = lower_.exponents();
    const double a = ab_.alpha;
    const double x0 = lower_.shift(), xb = b + x0;

    const DEValue z1 = eval_DE(x0, a + 1, lower_);
    const DEValue b1 = eval_DE(xb, a + 1, lower_), b0 = eval_DE(xb, a, lower_);
    const DEValue u1 = eval_DE(xb, a + 1, upper_), u0 = eval_DE(xb, a, upper_);

    // Unknowns (C3, C4, C5); C6 = 0 from the limit at infinity.
    Eigen::Matrix3d A;
    A << z1.D, z1.E, 0.0,
         b1.D, b1.E, -u1.D,
         -b0.D, b0.E, u0.D;
    const Eigen::Vector3d rhs(0.0, mu / delta_, 0.0);
    const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(Eigen::MatrixXd(A)).singularValues();
    cond_ = sv(2) > 0 ? sv(0) / sv(2) : kInf;
    if (!(cond_ < kMaxCondition)) {
        std::ostringstream os;
        os << "closed_threshold_value: pasting system is singular (condition number " << cond_ << ")";
        throw NumericError(os.str(), cond_);
    }
    const Eigen::Vector3d c = A.fullPivLu().solve(rhs);
    for (int i = 0; i < 3; ++i) c_[i] = c(i);

    const double Q1 = b1.D * u0.D - b0.D * u1.D;
    const double Q2 = u0.D * b1.E + u1.D * b0.E;
    const double den = Q1 * z1.E - Q2 * z1.D;
    const double md = mu / delta_;
    printed_ = {md * u0.D * z1.E / den, -md * z1.D * u0.D / den, md * (z1.E * b0.D + z1.D * b0.E) / den};
    const char* names[] = {"C3", "C4", "C5"};
    for (int i = 0; i < 3; ++i) {
        if (differs(c_[i], printed_[i])) {
            std::ostringstream os;
            os.precision(12);
            os << "printed " << names[i] << " = " << printed_[i] << " differs from solved value " << c_[i];
            warnings_.push_back(os.str());
        }
    }
}

Jet ThresholdClosedForm::jet(double u) const {
    JDRISK_REQUIRE(u >= 0, "closed_threshold_value: u must be nonnegative");
    const double md = mu_ / delta_;
    if (u == kInf) return {md, 0.0, 0.0};
    const double x = u + lower_.shift();
    if (u <= b_) {
        const DEJet j = de_jet(x, ab_.alpha, lower_);
        return {c_[0] * j.D[0] + c_[1] * j.E[0], c_[0] * j.D[1] + c_[1] * j.E[1],
                c_[0] * j.D[2] + c_[1] * j.E[2]};
    }
    const DEJet j = de_jet(x, ab_.alpha, upper_);
    return {c_[2] * j.D[0] + md, c_[2] * j.D[1], c_[2] * j.D[2]};
}

double closed_threshold_value(double u, double b, double mu, const RiskParams& params) {
    return ThresholdClosedForm(params, b, mu)(u);
}

BarrierClosedForm::BarrierClosedForm(const RiskParams& params, double b) : b_(b) {
    require_de_regime(params, "closed_barrier_value");
    JDRISK_REQUIRE(params.delta > 0, "closed_barrier_value: requires delta > 0");
    JDRISK_REQUIRE(b > 0, "closed_barrier_value: requires b > 0");
    de_ = DEParams::from_model(params);
    ab_ = de_.exponents();
    const double a = ab_.alpha;
    const double x0 = de_.shift(), xb = b + x0;
    const DEValue z1 = eval_DE(x0, a + 1, de_);
    const DEValue b0 = eval_DE(xb, a, de_);

    Eigen::Matrix2d A;
    A << z1.D, z1.E,
         -(a + 1) * b0.D, (a + 1) * b0.E;
    const Eigen::Vector2d c = A.fullPivLu().solve(Eigen::Vector2d(0.0, 1.0));
    if (!c.allFinite()) throw NumericError("closed_barrier_value: singular boundary system");
    c7_ = c(0);
    c8_ = c(1);

    const double Abar = b0.E * z1.D + b0.D * z1.E;
    p7_ = -z1.E / ((a + 1) * Abar);
    p8_ = z1.D / ((a + 1) * Abar);
    if (differs(c7_, p7_)) warnings_.push_back("printed C7 differs from solved value");
    if (differs(c8_, p8_)) warnings_.push_back("printed C8 differs from solved value");
}

Jet BarrierClosedForm::jet(double u) const {
    JDRISK_REQUIRE(u >= 0 && u <= b_, "closed_barrier_value: requires 0 <= u <= b");
    const DEJet j = de_jet(u + de_.shift(), ab_.alpha, de_);
    return {c7_ * j.D[0] + c8_ * j.E[0], c7_ * j.D[1] + c8_ * j.E[1], c7_ * j.D[2] + c8_ * j.E[2]};
}

double closed_barrier_value(double u, double b, const RiskParams& params) {
    return BarrierClosedForm(params, b)(u);
}

}  // namespace jdrisk
