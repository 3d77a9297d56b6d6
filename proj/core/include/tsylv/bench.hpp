#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "tsylv/problems.hpp"
#include "tsylv/report.hpp"

namespace tsylv {

enum class Method { tbas, bas, tfom, tgmres, tbs };

const char* method_id(Method m);
std::optional<Method> parse_method(const std::string& name);

/// One line of a benchmark table.
struct BenchmarkRow {
  std::string method;
  std::string config_label;
  index_t iterations = 0;
  double residual = 0.0;
  double wall_time_ms = 0.0;
  bool converged = false;
  std::string error;  // non-empty when the solver failed
};

/// Full outcome of one run: the table row, the solution (best iterate on
/// failure), and the solver report.
struct RunOutcome {
  BenchmarkRow row;
  DenseTensor3 x;
  SolveReport report;
};

/// Build the configured problem and run one method on it with x0 = 0.
/// Solver errors are folded into a failed row rather than propagated.
RunOutcome run_method(Method method, const ProblemConfig& cfg);

/// The two stock benchmark configurations (n = 1000, q = 3, n3 = 2, m = 10)
/// and (n = 2000, q = 3, n3 = 2, m = 6), tol 1e-6, mu 1, sign -1.
std::vector<ProblemConfig> table1_configs();

/// Run both stock configurations across tbas, bas, tfom and tgmres.
/// `progress` (optional) receives one line per finished run.
std::vector<BenchmarkRow> run_table1(std::ostream* progress = nullptr);

std::string format_rows(const std::vector<BenchmarkRow>& rows);
std::string rows_to_json_string(const std::vector<BenchmarkRow>& rows);

}  // namespace tsylv
