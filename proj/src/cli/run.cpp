#include "jdrisk/cli/run.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "jdrisk/cli/crosscheck.hpp"
#include "jdrisk/idesolver/solvers.hpp"
#include "jdrisk/model/operators.hpp"
#include "jdrisk/simulate/estimators.hpp"
#include "jdrisk/specialfn/closed_forms.hpp"

namespace jdrisk::cli {

namespace {

using nlohmann::json;

constexpr const char* kVersion = "1.0.0";

std::string n_label(std::uint64_t n) { return "n=" + std::to_string(n); }

std::string grid_label(const Grid& g) { return "grid=" + std::to_string(g.n()) + "/u_max=" + format_number(g.u_max()); }

std::string y_label(double y) { return "M(y=" + format_number(y) + ")"; }

json assumptions_json(const AssumptionsReport& a) {
    return {{"net_profit", a.net_profit},
            {"sigmaP_positive", a.sigmaP_positive},
            {"FR_support_ok", a.FR_support_ok},
            {"drift_dominance", a.drift_dominance},
            {"messages", a.messages}};
}

json numerics_json(const RunConfig& c) {
    const SimConfig& s = c.numerics.sim;
    return {{"sim",
             {{"dt", s.dt},
              {"dt_max", s.dt_max},
              {"adapt_k", s.adapt_k},
              {"t_max", s.t_max},
              {"paths", s.n_paths},
              {"seed", s.seed},
              {"bridge", s.bridge_correction},
              {"scheme", s.scheme == Scheme::euler ? "euler" : "exponential"}}},
            {"grid",
             {{"u_max", c.numerics.u_max.value_or(NumericsBlock::kDefaultUMax)},
              {"n", c.numerics.grid_n.value_or(NumericsBlock::kDefaultGridN)}}},
            {"ide",
             {{"method", c.numerics.ide.method == IdeMethod::direct ? "direct" : "fixed_point"},
              {"tol", c.numerics.ide.tol},
              {"max_iter", c.numerics.ide.max_iter}}}};
}

json ide_json(const std::string& what, const IDESolution& s) {
    return {{"quantity", what},
            {"residual", s.residual},
            {"iterations", s.iterations},
            {"last_change", s.last_change},
            {"method", s.method},
            {"far_field", s.tail.describe()},
            {"notes", s.notes}};
}

Grid task_grid(const RunConfig& c) {
    return Grid(c.numerics.u_max.value_or(NumericsBlock::kDefaultUMax),
                c.numerics.grid_n.value_or(NumericsBlock::kDefaultGridN));
}

void run_mc(const RunConfig& c, RunReport& rep, json& achieved) {
    const ModelBlock& m = c.model;
    const TaskBlock& t = c.task;
    const SimConfig& sim = c.numerics.sim;
    for (double u : t.u) {
        if (t.kind == Task::ruin || t.kind == Task::gerber_shiu) {
            MCEstimate total, by_claim, by_osc;
            double censored = 0.0;
            std::string prefix;
            if (t.kind == Task::ruin) {
                const RuinBreakdown r = estimate_ruin(m.params, m.claims, m.returns, u, sim);
                total = r.psi, by_claim = r.psi_s, by_osc = r.psi_d, censored = r.censored_fraction;
                prefix = "psi";
            } else {
                const GerberShiuEstimate g = estimate_gerber_shiu(m.params, m.claims, m.returns, u, m.penalty, sim);
                total = g.phi, by_claim = g.phi_s, by_osc = g.phi_d, censored = g.censored_fraction;
                prefix = "phi";
            }
            rep.rows.push_back({u, total.mean, total.std_err, "mc", prefix, n_label(total.n)});
            rep.rows.push_back({u, by_claim.mean, by_claim.std_err, "mc", prefix + "_s", n_label(by_claim.n)});
            rep.rows.push_back({u, by_osc.mean, by_osc.std_err, "mc", prefix + "_d", n_label(by_osc.n)});
            achieved.push_back({{"u", u}, {"censored_fraction", censored}});
        } else {
            const DividendEstimate d =
                t.kind == Task::dividends_threshold
                    ? estimate_threshold_dividends(m.params, m.claims, m.returns, u, t.b, t.mu, sim, t.k_max, t.y)
                    : estimate_barrier_dividends(m.params, m.claims, m.returns, u, t.b, sim, t.k_max, t.y);
            for (std::size_t k = 0; k < d.moments.size(); ++k) {
                const MCEstimate& e = d.moments[k];
                rep.rows.push_back({u, e.mean, e.std_err, "mc", "V" + std::to_string(k + 1), n_label(e.n)});
            }
            for (std::size_t i = 0; i < d.mgf.size(); ++i) {
                const MCEstimate& e = d.mgf[i];
                rep.rows.push_back({u, e.mean, e.std_err, "mc", y_label(t.y[i]), n_label(e.n)});
            }
            achieved.push_back({{"u", u}, {"censored_fraction", d.censored_fraction}});
        }
    }
}

void run_closed(const RunConfig& c, RunReport& rep, json& notes) {
    const RiskParams& p = c.model.params;
    const TaskBlock& t = c.task;
    if (p.lambda_P != 0.0 || p.lambda_R != 0.0) throw ConfigError("model", "closed forms require lambda_P = lambda_R = 0");
    std::function<Jet(double)> f;
    std::string q = t.quantity;
    if (q == "ruin") {
        f = [p](double u) { return closed_ruin_rho1_jet(u, p); };
        q = "psi";
    } else if (q == "gerber") {
        const GerberNoJumps g(p);
        f = [g](double u) { return g.jet(u); };
        q = "phi";
    } else if (q == "threshold") {
        const ThresholdClosedForm tf(p, t.b, t.mu);
        f = [tf](double u) { return tf.jet(u); };
        for (const auto& w : tf.warnings()) notes.push_back(w);
        notes.push_back("C3=" + format_number(tf.C3()) + " C4=" + format_number(tf.C4()) +
                        " C5=" + format_number(tf.C5()) + " cond=" + format_number(tf.condition_number()));
        q = "V1";
    } else if (q == "barrier") {
        const BarrierClosedForm bf(p, t.b);
        f = [bf](double u) { return bf.jet(u); };
        for (const auto& w : bf.warnings()) notes.push_back(w);
        notes.push_back("C7=" + format_number(bf.C7()) + " C8=" + format_number(bf.C8()));
        q = "V1";
    } else {
        throw ConfigError("task.quantity", "closed-form needs quantity ruin, gerber, threshold or barrier");
    }
    for (double u : t.u) {
        if (t.quantity == "barrier" && u > t.b) throw ConfigError("task.u", "barrier closed form needs u <= b");
        rep.rows.push_back({u, f(u).value, 0.0, "closed", q, "quadrature"});
    }
}

void run_ide(const RunConfig& c, RunReport& rep, json& achieved) {
    const ModelBlock& m = c.model;
    const TaskBlock& t = c.task;
    const SolveOptions& opt = c.numerics.ide;
    const std::string& q = t.quantity.empty() ? std::string("phi") : t.quantity;
    if (q == "phi" || q == "phi_s" || q == "phi_d") {
        const GSVariant v = q == "phi" ? GSVariant::phi : q == "phi_s" ? GSVariant::phi_s : GSVariant::phi_d;
        const Grid grid = task_grid(c);
        const IDESolution s = solve_gerber_ide(m.params, m.claims, m.returns, m.penalty, v, grid, opt);
        for (double u : t.u) rep.rows.push_back({u, s.solution(u), s.residual, "ide", q, grid_label(grid)});
        achieved.push_back(ide_json(q, s));
        return;
    }
    if (q != "threshold" && q != "barrier")
        throw ConfigError("task.quantity", "solve-ide needs quantity phi, phi_s, phi_d, threshold or barrier");
    if (!(t.b > 0)) throw ConfigError("task.b", "dividend problems need b > 0");
    MomentSolutions ms;
    Grid grid = task_grid(c);
    if (q == "threshold") {
        if (!(t.mu > 0)) throw ConfigError("task.mu", "threshold problems need mu > 0");
        ms = solve_threshold_moments(m.params, m.claims, m.returns, t.b, t.mu, t.k_max, grid, opt);
    } else {
        grid = Grid(t.b, c.numerics.grid_n.value_or(NumericsBlock::kDefaultGridN));
        ms = solve_barrier_moments(m.params, m.claims, m.returns, t.b, t.k_max, grid, opt);
    }
    for (std::size_t k = 0; k < ms.moments.size(); ++k) {
        const std::string name = "V" + std::to_string(k + 1);
        for (double u : t.u) {
            if (q == "barrier" && u > t.b) throw ConfigError("task.u", "barrier solutions are defined for u <= b");
            rep.rows.push_back({u, ms.moments[k].solution(u), ms.moments[k].residual, "ide", name, grid_label(grid)});
        }
        achieved.push_back(ide_json(name, ms.moments[k]));
    }
    if (ms.snap_distance > 0) achieved.push_back({{"threshold_used", ms.b_used}, {"snap_distance", ms.snap_distance}});
}

void run_crosscheck(const RunConfig& c, RunReport& rep, json& achieved, json& notes) {
    CrosscheckOptions opt;
    if (c.numerics.paths_given) opt.paths = c.numerics.sim.n_paths;
    opt.seed = c.numerics.sim.seed;
    opt.workers = c.numerics.sim.workers;
    opt.grid_n = c.numerics.grid_n.value_or(0);
    opt.u_max = c.numerics.u_max.value_or(0.0);
    const CrosscheckReport r = crosscheck(c.task.scenario, opt);
    rep.rows = r.rows;
    rep.crosscheck_passed = r.passed();
    for (const Comparison& cmp : r.comparisons) {
        json j = {{"quantity", cmp.quantity},
                  {"methods", cmp.methods},
                  {"gap", cmp.gap},
                  {"tolerance", cmp.tolerance},
                  {"pass", cmp.pass}};
        j["u"] = std::isnan(cmp.u) ? json("sup") : json(cmp.u);
        achieved.push_back(j);
    }
    for (const auto& n : r.notes) notes.push_back(n);
    notes.push_back(r.description);
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string format_table(const std::vector<Row>& rows, char sep) {
    std::ostringstream os;
    os << "u" << sep << "value" << sep << "uncertainty" << sep << "method" << sep << "scenario" << sep << "n_or_grid\n";
    for (const Row& r : rows)
        os << format_number(r.u) << sep << format_number(r.value) << sep << format_number(r.uncertainty) << sep
           << r.method << sep << r.scenario << sep << r.n_or_grid << '\n';
    return os.str();
}

RunReport execute(const RunConfig& c) {
    RunReport rep;
    const AssumptionsReport a = validate_model(c.model.params, c.model.claims, c.model.returns);
    json achieved = json::array(), notes = json::array();
    switch (c.task.kind) {
        case Task::ruin:
        case Task::gerber_shiu:
        case Task::dividends_threshold:
        case Task::dividends_barrier: run_mc(c, rep, achieved); break;
        case Task::closed_form: run_closed(c, rep, notes); break;
        case Task::solve_ide: run_ide(c, rep, achieved); break;
        case Task::crosscheck: run_crosscheck(c, rep, achieved, notes); break;
    }
    for (Row& r : rep.rows)
        if (c.task.kind != Task::crosscheck) r.scenario = task_name(c.task.kind) + ":" + r.scenario;
    rep.manifest = {{"tool", "jdrisk"},
                    {"version", kVersion},
                    {"task", task_name(c.task.kind)},
                    {"seed", c.numerics.sim.seed},
                    {"config", json::parse(c.source_text)},
                    {"numerics", numerics_json(c)},
                    {"assumptions", assumptions_json(a)},
                    {"achieved", achieved},
                    {"notes", notes},
                    {"rows", rep.rows.size()}};
    if (c.task.kind == Task::crosscheck) rep.manifest["crosscheck_passed"] = rep.crosscheck_passed;
    return rep;
}

void write_outputs(const RunReport& report, const RunConfig& config, const std::string& timestamp) {
    namespace fs = std::filesystem;
    const fs::path dir(config.output.dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("output.dir", "cannot create directory '" + dir.string() + "': " + ec.message());
    const char sep = config.output.format == "tsv" ? '\t' : ',';
    const fs::path table = dir / ("results." + config.output.format);
    std::ofstream t(table, std::ios::binary);
    if (!t) throw ConfigError("output.dir", "cannot write '" + table.string() + "'");
    t << format_table(report.rows, sep);
    json m = report.manifest;
    m["timestamp"] = timestamp;
    std::ofstream mf(dir / "manifest.json", std::ios::binary);
    if (!mf) throw ConfigError("output.dir", "cannot write manifest.json");
    mf << m.dump(2) << '\n';
}

int run_cli(int argc, char** argv) {
    CLI::App app{"jdrisk: ruin probabilities, Gerber-Shiu functions and dividend values for a jump-diffusion surplus"};
    std::string config_path, out_dir;
    std::optional<std::uint64_t> seed, paths;
    std::optional<int> grid;
    std::optional<double> umax;
    bool quiet = false, list = false;
    app.add_option("--config", config_path, "JSON run configuration");
    app.add_option("--seed", seed, "RNG seed (overrides the configuration)");
    app.add_option("--out", out_dir, "output directory (overrides the configuration)");
    app.add_option("--paths", paths, "Monte Carlo paths")->check(CLI::PositiveNumber);
    app.add_option("--grid", grid, "grid points")->check(CLI::Range(5, 1000000));
    app.add_option("--umax", umax, "truncation point")->check(CLI::PositiveNumber);
    app.add_flag("--quiet", quiet, "do not print the table");
    app.add_flag("--list-scenarios", list, "print the crosscheck scenarios and exit");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_config;
    }
    if (list) {
        for (const auto& s : crosscheck_scenarios()) std::cout << s << '\n';
        return exit_ok;
    }
    if (config_path.empty()) {
        std::cerr << "error: --config is required\n";
        return exit_config;
    }
    try {
        RunConfig cfg = load_config(config_path);
        if (seed) cfg.numerics.sim.seed = *seed;
        if (paths) {
            cfg.numerics.sim.n_paths = *paths;
            cfg.numerics.paths_given = true;
        }
        if (grid) cfg.numerics.grid_n = *grid;
        if (umax) cfg.numerics.u_max = *umax;
        if (!out_dir.empty()) cfg.output.dir = out_dir;
        const RunReport rep = execute(cfg);
        write_outputs(rep, cfg, utc_timestamp());
        if (!quiet) std::cout << format_table(rep.rows, cfg.output.format == "tsv" ? '\t' : ',');
        if (!rep.crosscheck_passed) {
            std::cerr << "crosscheck failed; see " << (std::filesystem::path(cfg.output.dir) / "manifest.json").string()
                      << '\n';
            return exit_crosscheck;
        }
        return exit_ok;
    } catch (const InvalidArgument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return exit_numeric;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return exit_numeric;
    }
}

}  // namespace jdrisk::cli
