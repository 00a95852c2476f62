#pragma once

// Parameter sweeps: the cartesian product of value lists substituted into a
// base config, evaluated by a worker pool and aggregated in row order.

#include <string>
#include <vector>

#include "tnum/run.hpp"

namespace tnum::cli {

struct SweepParameter {
  /// Dotted path into the base config, e.g. "map.omega".
  std::string path;
  std::vector<json> values;
};

struct SweepPlan {
  json base;
  std::vector<SweepParameter> parameters;
  std::size_t rows = 0;
  std::size_t max_rows = 100000;
  std::size_t workers = 0;  // 0: hardware concurrency
};

/// Validates the sweep document and the base config at the first tuple.
/// Throws ValidationError when the row count exceeds max_rows.
SweepPlan parse_sweep(const json& body, std::uint64_t seed);

/// Fixed CSV columns: row, one per parameter path, value, error_bound, exact,
/// verdict, iterations, status.
std::vector<std::string> sweep_columns(const SweepPlan& plan);

/// Runs every row; a failing row records its error kind in `status` without
/// stopping the sweep.
json run_sweep(const SweepPlan& plan, std::uint64_t seed, std::vector<std::string>& csv_lines);

}  // namespace tnum::cli
