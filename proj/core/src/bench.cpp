#include "tsylv/bench.hpp"

#include <chrono>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "tsylv/bas.hpp"
#include "tsylv/global_krylov.hpp"

namespace tsylv {

const char* method_id(Method m) {
  switch (m) {
    case Method::tbas:
      return "tbas";
    case Method::bas:
      return "bas";
    case Method::tfom:
      return "tfom";
    case Method::tgmres:
      return "tgmres";
    case Method::tbs:
      return "tbs";
  }
  return "?";
}

std::optional<Method> parse_method(const std::string& name) {
  for (Method m : {Method::tbas, Method::bas, Method::tfom, Method::tgmres, Method::tbs}) {
    if (name == method_id(m)) return m;
  }
  return std::nullopt;
}

namespace {

std::string config_label(const ProblemConfig& cfg) {
  std::ostringstream os;
  os << "n=" << cfg.n << " q=" << cfg.q << " n3=" << cfg.n3 << " m=" << cfg.m;
  return os.str();
}

RunOutcome outcome_from_report(const ProblemConfig& cfg, DenseTensor3 x, SolveReport rep) {
  RunOutcome out;
  out.row.method = rep.method;
  out.row.config_label = config_label(cfg);
  out.row.iterations = rep.iterations;
  out.row.residual = rep.final_residual();
  out.row.wall_time_ms = rep.wall_time_ms;
  out.row.converged = rep.converged;
  out.x = std::move(x);
  out.report = std::move(rep);
  return out;
}

}  // namespace

RunOutcome run_method(Method method, const ProblemConfig& cfg_in) {
  cfg_in.validate();
  const SylvesterProblem p = build_problem(cfg_in);
  ProblemConfig cfg = cfg_in;
  cfg.n = p.a.n1();  // file problems: the tensors are authoritative
  cfg.q = p.b.n1();
  cfg.n3 = p.a.n3();
  try {
    switch (method) {
      case Method::tbas: {
        auto res = tbas_restarted<double>(p.a, p.b, p.c, std::nullopt, cfg.m, cfg.tol,
                                          cfg.max_restarts, cfg.sign);
        return outcome_from_report(cfg, std::move(res.x), std::move(res.report));
      }
      case Method::bas: {
        auto res = bas_solve(p.a, p.b, p.c, cfg.m, cfg.tol, cfg.max_restarts, cfg.sign);
        return outcome_from_report(cfg, std::move(res.x), std::move(res.report));
      }
      case Method::tfom:
      case Method::tgmres: {
        const LinearOperator op = make_sylvester_operator(p.a, p.b, cfg.sign);
        auto res = restarted_solve(
            op, p.c, std::nullopt, cfg.m, cfg.tol, cfg.max_restarts,
            method == Method::tfom ? KrylovMethod::tfom : KrylovMethod::tgmres);
        return outcome_from_report(cfg, std::move(res.x), std::move(res.report));
      }
      case Method::tbs: {
        const auto t0 = std::chrono::steady_clock::now();
        DenseTensor3 x = t_bartels_stewart(p.a, p.b, p.c, cfg.sign);
        const double res = fro_norm(sylvester_residual(p.a, p.b, p.c, x, cfg.sign));
        SolveReport rep;
        rep.method = "tbs";
        rep.n = cfg.n;
        rep.s = cfg.q;
        rep.n3 = cfg.n3;
        rep.m = 0;
        rep.tol = cfg.tol;
        rep.converged = res <= cfg.tol;
        rep.residual_history = {res};
        rep.wall_time_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
        return outcome_from_report(cfg, std::move(x), std::move(rep));
      }
    }
    throw DimensionMismatch("run_method: unknown method");
  } catch (const MaxRestartsExceeded& e) {
    RunOutcome out = outcome_from_report(cfg, e.best_iterate(), e.report());
    out.row.method = method_id(method);
    out.row.converged = false;
    out.row.error = e.what();
    // the row reports the best iterate, so measure that iterate's residual
    out.row.residual = fro_norm(sylvester_residual(p.a, p.b, p.c, out.x, cfg.sign));
    return out;
  } catch (const Error& e) {
    RunOutcome out;
    out.row.method = method_id(method);
    out.row.config_label = config_label(cfg);
    out.row.converged = false;
    out.row.error = e.what();
    out.x = DenseTensor3(cfg.n, cfg.q, cfg.n3);
    return out;
  }
}

std::vector<ProblemConfig> table1_configs() {
  ProblemConfig row1;
  row1.n = 1000;
  row1.q = 3;
  row1.n3 = 2;
  row1.m = 10;
  row1.tol = 1e-6;
  row1.mu = 1.0;
  row1.seed = 1;
  row1.sign = -1;
  row1.kind = ProblemKind::convdiff;
  row1.max_restarts = 100;

  ProblemConfig row2 = row1;
  row2.n = 2000;
  row2.m = 6;
  return {row1, row2};
}

std::vector<BenchmarkRow> run_table1(std::ostream* progress) {
  std::vector<BenchmarkRow> rows;
  for (const auto& cfg : table1_configs()) {
    for (Method m : {Method::tbas, Method::bas, Method::tfom, Method::tgmres}) {
      RunOutcome out = run_method(m, cfg);
      if (progress) {
        (*progress) << out.row.config_label << "  " << out.row.method << ": its=" << out.row.iterations
                    << " residual=" << out.row.residual << " time=" << out.row.wall_time_ms
                    << " ms" << (out.row.converged ? "" : "  [FAILED]") << "\n";
      }
      rows.push_back(std::move(out.row));
    }
  }
  return rows;
}

std::string format_rows(const std::vector<BenchmarkRow>& rows) {
  std::ostringstream os;
  os << "config                      method    #its   ||R||_F        time (ms)   status\n";
  os << "-----------------------------------------------------------------------------\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%-27s %-8s %5lld   %-12.3e %10.1f   %s\n",
                  r.config_label.c_str(), r.method.c_str(),
                  static_cast<long long>(r.iterations), r.residual, r.wall_time_ms,
                  r.converged ? "converged" : (r.error.empty() ? "failed" : r.error.c_str()));
    os << buf;
  }
  return os.str();
}

std::string rows_to_json_string(const std::vector<BenchmarkRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json j{{"method", r.method},         {"config", r.config_label},
                     {"iterations", r.iterations}, {"residual", r.residual},
                     {"wall_time_ms", r.wall_time_ms}, {"converged", r.converged}};
    if (!r.error.empty()) j["error"] = r.error;
    arr.push_back(std::move(j));
  }
  return arr.dump(2);
}

}  // namespace tsylv
