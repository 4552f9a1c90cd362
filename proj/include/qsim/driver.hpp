/// @file  driver.hpp
/// @brief run / gen / check commands behind the qsim executable

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>

#include "json.hpp"

#include "qsim/circuit.hpp"
#include "qsim/sliced_state.hpp"

namespace qsim {

/// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,       ///< bad arguments or unreadable input
  kExitParse = 2,       ///< circuit text rejected
  kExitNodeBudget = 3,  ///< node budget exceeded
  kExitTimeLimit = 4,   ///< --time-limit exceeded
  kExitCheckFailed = 5, ///< oracle mismatch in `check`
  kExitInternal = 6,
};

enum class OutputFormat { Json, Text };

inline constexpr int kReportSchema = 1;

struct RunConfig {
  std::string input = "-";  ///< path, "-" for stdin
  std::size_t r_init = kDefaultSliceWidth;
  bool reorder = false;
  std::size_t node_budget = 0;          ///< 0: QSIM_NODE_BUDGET or the manager default
  std::optional<double> time_limit;     ///< seconds
  std::size_t shots = 0;
  std::uint64_t seed = 0;
  bool dump_amplitudes = false;
  OutputFormat format = OutputFormat::Json;
  /// Outcome lists and amplitude dumps stop at 2^limit entries.
  std::size_t enumeration_limit = kDefaultEnumerationLimit;
};

/// Node budget from QSIM_NODE_BUDGET, if set to a positive integer.
[[nodiscard]] std::optional<std::size_t> env_node_budget();

/// Simulates `circuit` and returns the report. Throws bdd::NodeBudgetExceeded
/// or bdd::TimeLimitExceeded when a limit is hit.
[[nodiscard]] nlohmann::json run_circuit(const Circuit &circuit, const RunConfig &config);

/// Reads, parses and runs config.input; writes the report to `out` and
/// diagnostics to `err`. Returns an ExitCode.
int cmd_run(const RunConfig &config, std::istream &in, std::ostream &out, std::ostream &err);

struct GenConfig {
  std::string family;  ///< random | ghz | bv
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::optional<std::string> hidden;  ///< bv only
};

int cmd_gen(const GenConfig &config, std::ostream &out, std::ostream &err);

struct CheckConfig {
  std::size_t n_max = 10;
  std::size_t cases = 20;
  std::uint64_t seed = 0;
  std::size_t r_init = kDefaultSliceWidth;
  OutputFormat format = OutputFormat::Json;
  /// Applied to the sliced state after simulation; for fault-injection tests.
  std::function<void(SlicedState &)> tamper;
};

/// Seed of case `index` at size n.
[[nodiscard]] std::uint64_t check_case_seed(std::uint64_t seed, std::size_t n, std::size_t index);

[[nodiscard]] nlohmann::json run_check(const CheckConfig &config);
int cmd_check(const CheckConfig &config, std::ostream &out, std::ostream &err);

/// Drops the fields that depend on the machine (timing, RSS) from a run report.
[[nodiscard]] nlohmann::json strip_resources(nlohmann::json report);

} // namespace qsim
