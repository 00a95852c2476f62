#pragma once

// Command dispatch, structured reports and exit statuses.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tnum/config.hpp"
#include "tnum/errors.hpp"

namespace tnum::cli {

using json = nlohmann::json;

enum ExitCode : int {
  kExitSuccess = 0,
  kExitValidation = 2,
  kExitNotConverged = 3,
  kExitPrecondition = 4,
  kExitInternal = 5,
};

int exit_code_for(ErrorKind kind);

/// Every subcommand, in help order.
const std::vector<std::string>& commands();

/// Values given on the command line; they replace the config's entries.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
  std::optional<std::size_t> max_iterations;
  std::optional<std::size_t> grid;
};

/// A config that passed validation. `body` is the normalized document
/// (command and seed filled in) that the inputs digest is taken over.
struct RunConfig {
  std::string command;
  std::uint64_t seed = 1;
  json body;
};

/// Merges overrides, checks the command against `command` (if nonempty) and
/// validates every field. Throws ValidationError or PreconditionError.
RunConfig load_config(json document, const std::string& command, const Overrides& overrides = {});

struct Report {
  /// command, inputs_digest, config, results (or error). Deterministic.
  json payload;
  /// version, seed, kernel set, elapsed time.
  json provenance;
  int exit_code = kExitSuccess;
  /// Sweep only: CSV header and rows.
  std::vector<std::string> csv_lines;
};

/// Never throws for library errors: they become an error payload and a
/// nonzero exit code.
Report run(const RunConfig& config);

/// FNV-1a 64-bit over the compact dump, as 16 hex digits.
std::string inputs_digest(const json& body);

enum class Format { Table, Record, Csv };
Format parse_format(const std::string& name);

/// The payload as compact text; identical seeds give identical bytes.
std::string payload_text(const Report& report);
std::string render(const Report& report, Format format);

/// Helpers shared with the sweep driver.
json measured(double value, double error_bound);
json exact_value(double value, const std::string& rational = {});

}  // namespace tnum::cli
