#include "jdrisk/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace jdrisk::cli {

namespace {

using nlohmann::json;

// Reads keys from one JSON object and rejects whatever was not read.
class Reader {
public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    std::string key_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    const json& raw(const std::string& key) {
        seen_.insert(key);
        return j_.at(key);
    }

    double number(const std::string& key, std::optional<double> fallback = std::nullopt) {
        if (!has(key)) return required(key, fallback);
        const json& v = raw(key);
        if (!v.is_number()) throw ConfigError(key_path(key), "expected a number");
        return v.get<double>();
    }

    std::int64_t integer(const std::string& key, std::optional<std::int64_t> fallback = std::nullopt) {
        if (!has(key)) return required(key, fallback);
        const json& v = raw(key);
        if (!v.is_number_integer()) throw ConfigError(key_path(key), "expected an integer");
        return v.get<std::int64_t>();
    }

    bool boolean(const std::string& key, std::optional<bool> fallback = std::nullopt) {
        if (!has(key)) return required(key, fallback);
        const json& v = raw(key);
        if (!v.is_boolean()) throw ConfigError(key_path(key), "expected true or false");
        return v.get<bool>();
    }

    std::string string(const std::string& key, std::optional<std::string> fallback = std::nullopt) {
        if (!has(key)) return required(key, fallback);
        const json& v = raw(key);
        if (!v.is_string()) throw ConfigError(key_path(key), "expected a string");
        return v.get<std::string>();
    }

    std::vector<double> numbers(const std::string& key, std::optional<std::vector<double>> fallback = std::nullopt) {
        if (!has(key)) return required(key, fallback);
        const json& v = raw(key);
        if (!v.is_array()) throw ConfigError(key_path(key), "expected an array of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number()) throw ConfigError(key_path(key) + "[" + std::to_string(i) + "]", "expected a number");
            out.push_back(v[i].get<double>());
        }
        return out;
    }

    Reader object(const std::string& key) { return Reader(raw(key), key_path(key)); }

    void finish() const {
        for (const auto& [key, value] : j_.items())
            if (!seen_.count(key)) throw ConfigError(key_path(key), "unknown key");
    }

private:
    template <class T>
    T required(const std::string& key, const std::optional<T>& fallback) const {
        if (!fallback) throw ConfigError(key_path(key), "required key missing");
        return *fallback;
    }

    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

// Runs a library constructor and reports its InvalidArgument against the key path.
template <class F>
auto at_key(const std::string& where, F&& f) {
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const InvalidArgument& e) {
        throw ConfigError(where, e.what());
    }
}

JumpLaw read_law(Reader r, JumpRole role) {
    const std::string where = r.key_path("family");
    const std::string family = r.string("family");
    JumpLaw law = at_key(where, [&]() -> JumpLaw {
        if (family == "exponential") return JumpLaw::exponential(r.number("mean"), role);
        if (family == "mixed_exponential") {
            if (!r.has("components")) throw ConfigError(r.key_path("components"), "required key missing");
            const json& arr = r.raw("components");
            if (!arr.is_array()) throw ConfigError(r.key_path("components"), "expected an array of objects");
            std::vector<ExpComponent> comps;
            for (std::size_t i = 0; i < arr.size(); ++i) {
                Reader c(arr[i], r.key_path("components") + "[" + std::to_string(i) + "]");
                ExpComponent e;
                e.weight = c.number("weight");
                e.mean = c.number("mean");
                e.sign = static_cast<int>(c.integer("sign", 1));
                c.finish();
                comps.push_back(e);
            }
            return JumpLaw::mixed_exponential(std::move(comps), role);
        }
        if (family == "normal") return JumpLaw::normal(r.number("mean"), r.number("sd"), role);
        if (family == "point_mass") return JumpLaw::point_mass(r.number("value"), role);
        if (family == "shifted_lognormal") return JumpLaw::shifted_lognormal(r.number("mu"), r.number("sigma"), role);
        if (family == "empirical") return JumpLaw::empirical(r.numbers("values"), r.numbers("weights"), role);
        throw ConfigError(where, "unknown family '" + family +
                                     "' (exponential, mixed_exponential, normal, point_mass, shifted_lognormal, "
                                     "empirical)");
    });
    r.finish();
    return law;
}

Penalty read_penalty(Reader r) {
    const std::string where = r.key_path("kind");
    const std::string kind = r.string("kind");
    Penalty p = at_key(where, [&]() -> Penalty {
        if (kind == "one") return Penalty::one();
        if (kind == "deficit_power") return Penalty::deficit_power(static_cast<int>(r.integer("k")));
        if (kind == "deficit_indicator") return Penalty::deficit_indicator(r.number("c"));
        if (kind == "table") return Penalty::table(r.numbers("x1"), r.numbers("x2"), r.numbers("values"));
        throw ConfigError(where, "unknown kind '" + kind + "' (one, deficit_power, deficit_indicator, table)");
    });
    r.finish();
    return p;
}

ModelBlock read_model(Reader r) {
    ModelBlock m;
    RiskParams& p = m.params;
    p.p = r.number("p");
    p.sigma_P = r.number("sigma_P", 0.0);
    p.lambda_P = r.number("lambda_P", 0.0);
    p.r = r.number("r", 0.0);
    p.sigma_R = r.number("sigma_R", 0.0);
    p.lambda_R = r.number("lambda_R", 0.0);
    p.rho = r.number("rho", 0.0);
    p.delta = r.number("delta", 0.0);
    at_key("model", [&] {
        p.validate();
        return 0;
    });
    if (r.has("claims")) m.claims = read_law(r.object("claims"), JumpRole::claim);
    else if (p.lambda_P > 0) throw ConfigError(r.key_path("claims"), "required when lambda_P > 0");
    if (r.has("returns")) m.returns = read_law(r.object("returns"), JumpRole::ret);
    else if (p.lambda_R > 0) throw ConfigError(r.key_path("returns"), "required when lambda_R > 0");
    if (r.has("penalty")) m.penalty = read_penalty(r.object("penalty"));
    r.finish();
    return m;
}

Task parse_task(const std::string& where, const std::string& s) {
    if (s == "ruin") return Task::ruin;
    if (s == "gerber-shiu") return Task::gerber_shiu;
    if (s == "dividends-threshold") return Task::dividends_threshold;
    if (s == "dividends-barrier") return Task::dividends_barrier;
    if (s == "closed-form") return Task::closed_form;
    if (s == "solve-ide") return Task::solve_ide;
    if (s == "crosscheck") return Task::crosscheck;
    throw ConfigError(where, "unknown task '" + s +
                                 "' (ruin, gerber-shiu, dividends-threshold, dividends-barrier, closed-form, "
                                 "solve-ide, crosscheck)");
}

TaskBlock read_task(Reader r) {
    TaskBlock t;
    t.kind = parse_task(r.key_path("kind"), r.string("kind"));
    const bool needs_u = t.kind != Task::crosscheck;
    t.u = needs_u ? r.numbers("u") : r.numbers("u", std::vector<double>{});
    for (double u : t.u)
        if (!(u >= 0) || !std::isfinite(u)) throw ConfigError(r.key_path("u"), "probe points must be finite and >= 0");
    t.quantity = r.string("quantity", "");
    const bool dividends = t.kind == Task::dividends_threshold || t.kind == Task::dividends_barrier;
    t.b = r.number("b", 0.0);
    t.mu = r.number("mu", 0.0);
    t.k_max = static_cast<int>(r.integer("k_max", 1));
    t.y = r.numbers("y", std::vector<double>{});
    t.scenario = t.kind == Task::crosscheck ? r.string("scenario") : r.string("scenario", "");
    if (dividends && !(t.b > 0)) throw ConfigError(r.key_path("b"), "dividend tasks need b > 0");
    if (t.kind == Task::dividends_threshold && !(t.mu > 0)) throw ConfigError(r.key_path("mu"), "needs mu > 0");
    if (t.k_max < 1 || t.k_max > 8) throw ConfigError(r.key_path("k_max"), "must be in 1..8");
    r.finish();
    return t;
}

Scheme parse_scheme(const std::string& where, const std::string& s) {
    if (s == "euler") return Scheme::euler;
    if (s == "exponential") return Scheme::exponential;
    throw ConfigError(where, "unknown scheme '" + s + "' (euler, exponential)");
}

NumericsBlock read_numerics(Reader r) {
    NumericsBlock n;
    if (r.has("sim")) {
        Reader s = r.object("sim");
        SimConfig& c = n.sim;
        c.dt = s.number("dt", c.dt);
        c.dt_max = s.number("dt_max", c.dt_max);
        c.adapt_k = s.number("adapt_k", c.adapt_k);
        c.t_max = s.number("t_max", c.t_max);
        n.paths_given = s.has("paths");
        const auto paths = s.integer("paths", static_cast<std::int64_t>(c.n_paths));
        const auto seed = s.integer("seed", static_cast<std::int64_t>(c.seed));
        if (paths < 1) throw ConfigError(s.key_path("paths"), "must be >= 1");
        if (seed < 0) throw ConfigError(s.key_path("seed"), "must be >= 0");
        c.n_paths = static_cast<std::uint64_t>(paths);
        c.seed = static_cast<std::uint64_t>(seed);
        c.bridge_correction = s.boolean("bridge", c.bridge_correction);
        if (s.has("scheme")) c.scheme = parse_scheme(s.key_path("scheme"), s.string("scheme"));
        const auto workers = s.integer("workers", 1);
        if (workers < 0) throw ConfigError(s.key_path("workers"), "must be >= 0");
        c.workers = static_cast<unsigned>(workers);
        at_key("numerics.sim", [&] {
            c.validate();
            return 0;
        });
        s.finish();
    }
    if (r.has("grid")) {
        Reader g = r.object("grid");
        if (g.has("u_max")) {
            n.u_max = g.number("u_max");
            if (!(*n.u_max > 0) || !std::isfinite(*n.u_max)) throw ConfigError(g.key_path("u_max"), "must be > 0");
        }
        if (g.has("n")) {
            n.grid_n = static_cast<int>(g.integer("n"));
            if (*n.grid_n < 5) throw ConfigError(g.key_path("n"), "must be >= 5");
        }
        g.finish();
    }
    if (r.has("ide")) {
        Reader i = r.object("ide");
        const std::string method = i.string("method", "fixed_point");
        if (method == "fixed_point") n.ide.method = IdeMethod::fixed_point;
        else if (method == "direct") n.ide.method = IdeMethod::direct;
        else throw ConfigError(i.key_path("method"), "unknown method '" + method + "' (fixed_point, direct)");
        n.ide.tol = i.number("tol", n.ide.tol);
        n.ide.max_iter = static_cast<int>(i.integer("max_iter", n.ide.max_iter));
        n.ide.direct_fallback = i.boolean("direct_fallback", n.ide.direct_fallback);
        if (!(n.ide.tol > 0)) throw ConfigError(i.key_path("tol"), "must be > 0");
        if (n.ide.max_iter < 1) throw ConfigError(i.key_path("max_iter"), "must be >= 1");
        i.finish();
    }
    r.finish();
    return n;
}

OutputBlock read_output(Reader r) {
    OutputBlock o;
    o.dir = r.string("dir", o.dir);
    o.format = r.string("format", o.format);
    if (o.format != "csv" && o.format != "tsv") throw ConfigError(r.key_path("format"), "must be csv or tsv");
    r.finish();
    return o;
}

std::string line_column(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

std::string task_name(Task t) {
    switch (t) {
        case Task::ruin: return "ruin";
        case Task::gerber_shiu: return "gerber-shiu";
        case Task::dividends_threshold: return "dividends-threshold";
        case Task::dividends_barrier: return "dividends-barrier";
        case Task::closed_form: return "closed-form";
        case Task::solve_ide: return "solve-ide";
        case Task::crosscheck: return "crosscheck";
    }
    return "?";
}

RunConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        std::string msg = e.what();
        const auto cut = msg.find("parse error");
        if (cut != std::string::npos) msg = msg.substr(cut);
        throw ConfigError(line_column(text, e.byte), msg);
    }
    Reader root(j, "");
    RunConfig cfg;
    if (root.has("model")) cfg.model = read_model(root.object("model"));
    else throw ConfigError("model", "required key missing");
    if (root.has("task")) cfg.task = read_task(root.object("task"));
    else throw ConfigError("task", "required key missing");
    if (root.has("numerics")) cfg.numerics = read_numerics(root.object("numerics"));
    if (root.has("output")) cfg.output = read_output(root.object("output"));
    root.finish();
    cfg.source_text = j.dump();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open configuration file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace jdrisk::cli
