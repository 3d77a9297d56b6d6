#include "tsylv/report.hpp"

#include <json.hpp>

namespace tsylv {

namespace {

nlohmann::json report_json(const SolveReport& r) {
  nlohmann::json j{{"method", r.method},
                   {"n", r.n},
                   {"s", r.s},
                   {"n3", r.n3},
                   {"m", r.m},
                   {"tol", r.tol},
                   {"iterations", r.iterations},
                   {"restarts", r.restarts},
                   {"converged", r.converged},
                   {"residual_history", r.residual_history},
                   {"wall_time_ms", r.wall_time_ms}};
  if (r.block_width > 0) j["block_width"] = r.block_width;
  if (!r.warnings.empty()) j["warnings"] = r.warnings;
  return j;
}

}  // namespace

std::string to_json_string(const SolveReport& report) { return report_json(report).dump(2); }

}  // namespace tsylv
