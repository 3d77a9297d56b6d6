#pragma once

#include <string>
#include <vector>

#include "tsylv/tensor.hpp"

namespace tsylv {

/// Outcome of one iterative solve. `residual_history` carries the cheap
/// per-inner-iteration estimates with the explicitly recomputed residual
/// appended at every restart boundary; `iterations` counts cumulative inner
/// Arnoldi steps across restarts.
struct SolveReport {
  std::string method;
  index_t n = 0;
  index_t s = 0;
  index_t n3 = 0;
  int m = 0;
  double tol = 0.0;
  index_t iterations = 0;
  index_t restarts = 0;
  bool converged = false;
  std::vector<double> residual_history;
  double wall_time_ms = 0.0;
  index_t block_width = 0;  // nonzero only for block methods
  std::vector<std::string> warnings;

  double final_residual() const {
    return residual_history.empty() ? 0.0 : residual_history.back();
  }
};

/// JSON object with the fields above; block_width and warnings are emitted
/// only when set.
std::string to_json_string(const SolveReport& report);

/// Restart budget exhausted; carries the best iterate found and the report
/// accumulated so far.
template <typename T>
class MaxRestartsExceededT : public Error {
 public:
  MaxRestartsExceededT(const std::string& what, Tensor3<T> best, SolveReport report)
      : Error(what), best_(std::move(best)), report_(std::move(report)) {}
  const Tensor3<T>& best_iterate() const noexcept { return best_; }
  const SolveReport& report() const noexcept { return report_; }

 private:
  Tensor3<T> best_;
  SolveReport report_;
};
using MaxRestartsExceeded = MaxRestartsExceededT<double>;

}  // namespace tsylv
