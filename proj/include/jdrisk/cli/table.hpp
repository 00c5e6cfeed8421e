#pragma once

#include <string>
#include <vector>

namespace jdrisk::cli {

/// One output row. `method` is mc, closed or ide; `uncertainty` is the
/// standard error for mc, the equation residual for ide and 0 for closed.
struct Row {
    double u = 0.0;
    double value = 0.0;
    double uncertainty = 0.0;
    std::string method;
    std::string scenario;
    std::string n_or_grid;
};

/// Header line plus one line per row, fields separated by `sep`.
std::string format_table(const std::vector<Row>& rows, char sep = ',');

/// Round-trip decimal representation used in tables and manifests.
std::string format_number(double x);

}  // namespace jdrisk::cli
