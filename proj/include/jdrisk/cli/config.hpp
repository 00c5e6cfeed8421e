#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jdrisk/errors.hpp"
#include "jdrisk/idesolver/solvers.hpp"
#include "jdrisk/model/jump_law.hpp"
#include "jdrisk/model/params.hpp"
#include "jdrisk/model/penalty.hpp"
#include "jdrisk/simulate/path.hpp"

namespace jdrisk::cli {

/// A malformed or inconsistent configuration. `where()` names the offending
/// key path (e.g. "model.claims.mean") or the line and column of a syntax error.
class ConfigError : public InvalidArgument {
public:
    ConfigError(const std::string& where, const std::string& what)
        : InvalidArgument(where.empty() ? what : where + ": " + what), where_(where) {}
    const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

enum class Task { ruin, gerber_shiu, dividends_threshold, dividends_barrier, closed_form, solve_ide, crosscheck };

std::string task_name(Task t);

struct ModelBlock {
    RiskParams params;
    JumpLaw claims = JumpLaw::exponential(1.0, JumpRole::claim);
    JumpLaw returns = JumpLaw::shifted_lognormal(0.0, 0.1, JumpRole::ret);
    Penalty penalty = Penalty::one();
};

struct TaskBlock {
    Task kind = Task::ruin;
    std::vector<double> u;          ///< probe surpluses
    std::string quantity;           ///< task-specific selector, see the README
    double b = 0.0;                 ///< threshold or barrier level
    double mu = 0.0;                ///< dividend rate (threshold strategy)
    int k_max = 1;                  ///< highest dividend moment
    std::vector<double> y;          ///< MGF arguments
    std::string scenario;           ///< crosscheck scenario name
};

struct NumericsBlock {
    SimConfig sim;
    bool paths_given = false;         ///< sim.n_paths came from the file or a flag
    std::optional<double> u_max;      ///< default 50, or the scenario's own for crosscheck
    std::optional<int> grid_n;        ///< default 2001, or the scenario's own for crosscheck
    SolveOptions ide;

    static constexpr double kDefaultUMax = 50.0;
    static constexpr int kDefaultGridN = 2001;
};

struct OutputBlock {
    std::string dir = "out";
    std::string format = "csv";  ///< csv or tsv
};

struct RunConfig {
    ModelBlock model;
    TaskBlock task;
    NumericsBlock numerics;
    OutputBlock output;
    std::string source_text;  ///< the configuration as read, echoed into the manifest
};

/// Parses a JSON configuration. Unknown keys, wrong types and missing
/// required values raise ConfigError naming the key.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

}  // namespace jdrisk::cli
