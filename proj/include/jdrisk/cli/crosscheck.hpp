#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "jdrisk/cli/table.hpp"

namespace jdrisk::cli {

/// A pairwise comparison between two methods at one probe point, or over the
/// whole grid for sup-norm comparisons (u is then NaN).
struct Comparison {
    std::string quantity;
    std::string methods;  ///< e.g. "mc-closed"
    double u = 0.0;
    double gap = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct CrosscheckReport {
    std::string scenario;
    std::string description;
    std::vector<Row> rows;
    std::vector<Comparison> comparisons;
    std::vector<std::string> notes;

    bool passed() const;
};

struct CrosscheckOptions {
    std::uint64_t paths = 20000;
    std::uint64_t seed = 1;
    int grid_n = 0;     ///< 0 keeps the scenario's grid
    double u_max = 0;   ///< 0 keeps the scenario's truncation
    unsigned workers = 1;
};

/// Names of the built-in scenarios.
std::vector<std::string> crosscheck_scenarios();

/// Runs every applicable method on a built-in scenario. MC pairs must agree
/// within 3 combined standard errors, deterministic pairs within 1e-3 in the
/// sup norm over the grid. Throws InvalidArgument for an unknown scenario.
CrosscheckReport crosscheck(const std::string& scenario, const CrosscheckOptions& opt = {});

}  // namespace jdrisk::cli
