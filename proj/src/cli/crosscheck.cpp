#include "jdrisk/cli/crosscheck.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "jdrisk/errors.hpp"
#include "jdrisk/idesolver/solvers.hpp"
#include "jdrisk/simulate/estimators.hpp"
#include "jdrisk/specialfn/closed_forms.hpp"

namespace jdrisk::cli {

namespace {

constexpr double kMcSigmas = 3.0;
constexpr double kDeterministicTol = 1e-3;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Scenario {
    std::string description;
    RiskParams params;
    JumpLaw claims = JumpLaw::exponential(1.0, JumpRole::claim);
    JumpLaw returns = JumpLaw::shifted_lognormal(0.0, 0.1, JumpRole::ret);
    std::vector<double> probes;
    double u_max = 50.0;
    int grid_n = 2001;
    double t_max = 200.0;
    bool has_closed = false;
    enum class Kind { ruin, gerber, threshold, barrier } kind = Kind::ruin;
    double b = 0.0, mu = 0.0;
};

RiskParams base_diffusion(double rho) {
    RiskParams m;
    m.p = 1.0;
    m.r = 0.2;
    m.sigma_P = 1.0;
    m.sigma_R = 0.5;
    m.rho = rho;
    return m;
}

RiskParams base_discounted(double rho) {
    RiskParams m;
    m.p = 1.0;
    m.r = 0.05;
    m.sigma_P = 1.0;
    m.sigma_R = 0.5;
    m.rho = rho;
    m.delta = 0.1;
    return m;
}

RiskParams base_jumps(double lambda_R) {
    RiskParams m;
    m.p = 1.0;
    m.sigma_P = 0.5;
    m.lambda_P = 1.0;
    m.r = 0.2;
    m.sigma_R = 0.5;
    m.lambda_R = lambda_R;
    return m;
}

const std::map<std::string, Scenario>& registry() {
    static const std::map<std::string, Scenario> table = [] {
        std::map<std::string, Scenario> t;
        Scenario s;
        s.description = "jump-free ruin probability, rho = 1: MC, K-ratio quadrature, BVP";
        s.params = base_diffusion(1.0);
        s.probes = {0.5, 1.0, 2.0};
        s.u_max = 20.0;
        s.grid_n = 2001;
        s.has_closed = true;
        t["example-3-1-rho1"] = s;

        s = Scenario{};
        s.description = "jump-free ruin probability, rho = 0: MC, BVP";
        s.params = base_diffusion(0.0);
        s.probes = {0.5, 1.0, 2.0};
        s.u_max = 20.0;
        t["example-3-1-rho0"] = s;

        s.description = "jump-free ruin probability, rho = 0.5: MC, BVP";
        s.params = base_diffusion(0.5);
        t["example-3-1-rho0.5"] = s;

        s = Scenario{};
        s.description = "jump-free discounted ruin probability, rho = 0.3: MC, D-function closed form, BVP";
        s.params = base_discounted(0.3);
        s.kind = Scenario::Kind::gerber;
        s.probes = {0.5, 1.0, 2.0};
        s.t_max = 150.0;
        s.has_closed = true;
        t["example-3-2"] = s;

        s = Scenario{};
        s.description = "threshold dividends, rho = 0, b = 2, mu = 0.5: MC, closed form, IDE";
        s.params = base_discounted(0.0);
        s.kind = Scenario::Kind::threshold;
        s.b = 2.0;
        s.mu = 0.5;
        s.probes = {0.5, 2.0, 4.0};
        s.t_max = 150.0;
        s.has_closed = true;
        t["example-4-1-rho0"] = s;

        s = Scenario{};
        s.description = "barrier dividends, rho = 0, b = 1: MC, closed form, IDE";
        s.params = base_discounted(0.0);
        s.kind = Scenario::Kind::barrier;
        s.b = 1.0;
        s.probes = {0.25, 0.5, 1.0};
        s.u_max = 1.0;
        s.grid_n = 1001;
        s.t_max = 150.0;
        s.has_closed = true;
        t["example-4-2-rho0"] = s;

        s = Scenario{};
        s.description = "ruin with exponential claims (mean 0.5, lambda_P = 1): MC, IDE";
        s.params = base_jumps(0.0);
        s.claims = JumpLaw::exponential(0.5, JumpRole::claim);
        s.probes = {0.25, 0.5, 1.0, 2.0, 4.0};
        s.u_max = 50.0;
        s.grid_n = 2001;
        t["jumps-exponential"] = s;

        s.description = "ruin with exponential claims and lognormal return jumps (lambda_R = 0.5): MC, IDE";
        s.params = base_jumps(0.5);
        t["jumps-lognormal-returns"] = s;
        return t;
    }();
    return table;
}

std::string n_label(std::uint64_t n) { return "n=" + std::to_string(n); }

std::string grid_label(const Grid& g) {
    std::ostringstream os;
    os << "grid=" << g.n() << "/u_max=" << g.u_max();
    return os.str();
}

SimConfig mc_config(const Scenario& s, const CrosscheckOptions& opt) {
    SimConfig c;
    c.dt = 1e-3;
    c.dt_max = 0.1;
    c.t_max = s.t_max;
    c.n_paths = opt.paths;
    c.seed = opt.seed;
    c.scheme = Scheme::exponential;
    c.workers = opt.workers;
    return c;
}

struct Builder {
    CrosscheckReport& report;

    void mc_pair(const std::string& quantity, const std::string& methods, double u, double a, double se_a, double b,
                 double se_b) {
        const double se = std::sqrt(se_a * se_a + se_b * se_b);
        const double gap = std::abs(a - b);
        const double tol = kMcSigmas * se;
        report.comparisons.push_back({quantity, methods, u, gap, tol, gap <= tol});
    }

    void sup_pair(const std::string& quantity, const std::string& methods, const Grid& g,
                  const std::function<double(double)>& x, const std::function<double(double)>& y) {
        double gap = 0.0;
        for (double u : g.nodes()) gap = std::max(gap, std::abs(x(u) - y(u)));
        report.comparisons.push_back({quantity, methods, kNaN, gap, kDeterministicTol, gap <= kDeterministicTol});
    }
};

void run_ruin(const Scenario& s, const CrosscheckOptions& opt, CrosscheckReport& rep) {
    Builder bld{rep};
    const int n = opt.grid_n > 0 ? opt.grid_n : s.grid_n;
    const double u_max = opt.u_max > 0 ? opt.u_max : s.u_max;
    const Grid grid(u_max, n);
    const bool discounted = s.kind == Scenario::Kind::gerber;
    const std::string q = discounted ? "phi" : "psi";
    const IDESolution ide =
        solve_gerber_ide(s.params, s.claims, s.returns, Penalty::one(), GSVariant::phi, grid);
    std::function<double(double)> closed;
    if (s.has_closed) {
        if (discounted) {
            const GerberNoJumps g(s.params);
            closed = [g](double u) { return g(u); };
        } else {
            const RiskParams m = s.params;
            closed = [m](double u) { return closed_ruin_rho1(u, m); };
        }
    }
    const SimConfig cfg = mc_config(s, opt);
    for (double u : s.probes) {
        MCEstimate mc;
        if (discounted) mc = estimate_gerber_shiu(s.params, s.claims, s.returns, u, Penalty::one(), cfg).phi;
        else mc = estimate_ruin(s.params, s.claims, s.returns, u, cfg).psi;
        rep.rows.push_back({u, mc.mean, mc.std_err, "mc", q, n_label(mc.n)});
        rep.rows.push_back({u, ide.solution(u), ide.residual, "ide", q, grid_label(grid)});
        if (closed) {
            rep.rows.push_back({u, closed(u), 0.0, "closed", q, "quadrature"});
            bld.mc_pair(q, "mc-closed", u, mc.mean, mc.std_err, closed(u), 0.0);
        } else {
            bld.mc_pair(q, "mc-ide", u, mc.mean, mc.std_err, ide.solution(u), 0.0);
        }
    }
    if (closed) bld.sup_pair(q, "ide-closed", grid, [&](double u) { return ide.solution(u); }, closed);
    rep.notes.insert(rep.notes.end(), ide.notes.begin(), ide.notes.end());
}

void run_dividends(const Scenario& s, const CrosscheckOptions& opt, CrosscheckReport& rep) {
    Builder bld{rep};
    const bool barrier = s.kind == Scenario::Kind::barrier;
    const int n = opt.grid_n > 0 ? opt.grid_n : s.grid_n;
    const double u_max = barrier ? s.b : (opt.u_max > 0 ? opt.u_max : s.u_max);
    const Grid grid(u_max, n);
    const MomentSolutions ms = barrier ? solve_barrier_moments(s.params, s.claims, s.returns, s.b, 1, grid)
                                       : solve_threshold_moments(s.params, s.claims, s.returns, s.b, s.mu, 1, grid);
    const IDESolution& ide = ms.moments.front();
    std::function<double(double)> closed;
    if (barrier) {
        const BarrierClosedForm f(s.params, s.b);
        closed = [f](double u) { return f(u); };
        rep.notes.insert(rep.notes.end(), f.warnings().begin(), f.warnings().end());
    } else {
        const ThresholdClosedForm f(s.params, s.b, s.mu);
        closed = [f](double u) { return f(u); };
        rep.notes.insert(rep.notes.end(), f.warnings().begin(), f.warnings().end());
    }
    const SimConfig cfg = mc_config(s, opt);
    const std::string q = "V1";
    for (double u : s.probes) {
        const DividendEstimate d =
            barrier ? estimate_barrier_dividends(s.params, s.claims, s.returns, u, s.b, cfg, 1)
                    : estimate_threshold_dividends(s.params, s.claims, s.returns, u, s.b, s.mu, cfg, 1);
        const MCEstimate& mc = d.moments.front();
        rep.rows.push_back({u, mc.mean, mc.std_err, "mc", q, n_label(mc.n)});
        rep.rows.push_back({u, ide.solution(u), ide.residual, "ide", q, grid_label(grid)});
        rep.rows.push_back({u, closed(u), 0.0, "closed", q, "quadrature"});
        bld.mc_pair(q, "mc-closed", u, mc.mean, mc.std_err, closed(u), 0.0);
        bld.mc_pair(q, "mc-ide", u, mc.mean, mc.std_err, ide.solution(u), 0.0);
    }
    bld.sup_pair(q, "ide-closed", grid, [&](double u) { return ide.solution(u); }, closed);
    if (ms.snap_distance > 0) {
        std::ostringstream os;
        os << "threshold snapped to grid node " << ms.b_used;
        rep.notes.push_back(os.str());
    }
}

}  // namespace

bool CrosscheckReport::passed() const {
    return std::all_of(comparisons.begin(), comparisons.end(), [](const Comparison& c) { return c.pass; });
}

std::vector<std::string> crosscheck_scenarios() {
    std::vector<std::string> names;
    for (const auto& [name, s] : registry()) names.push_back(name);
    return names;
}

CrosscheckReport crosscheck(const std::string& scenario, const CrosscheckOptions& opt) {
    const auto& reg = registry();
    const auto it = reg.find(scenario);
    if (it == reg.end()) {
        std::string known;
        for (const auto& [name, s] : reg) known += (known.empty() ? "" : ", ") + name;
        throw InvalidArgument("unknown crosscheck scenario '" + scenario + "' (" + known + ")");
    }
    JDRISK_REQUIRE(opt.paths >= 2, "crosscheck: need at least 2 paths");
    const Scenario& s = it->second;
    CrosscheckReport rep;
    rep.scenario = scenario;
    rep.description = s.description;
    try {
        if (s.kind == Scenario::Kind::threshold || s.kind == Scenario::Kind::barrier) run_dividends(s, opt, rep);
        else run_ruin(s, opt, rep);
    } catch (const NumericError& e) {
        throw NumericError("crosscheck " + scenario + ": " + e.what(), e.achieved());
    } catch (const InvalidArgument& e) {
        throw InvalidArgument("crosscheck " + scenario + ": " + e.what());
    }
    for (Row& r : rep.rows) r.scenario = scenario + ":" + r.scenario;
    return rep;
}

}  // namespace jdrisk::cli
