// Command-line driver: solve Sylvester tensor equations with the direct or
// iterative methods, generate benchmark problems, and reproduce the stock
// convergence table.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tsylv/tsylv.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNotConverged = 2;

tsylv::ProblemConfig add_problem_options(CLI::App* cmd, std::string* problem, std::string* sign) {
  tsylv::ProblemConfig cfg;
  cmd->add_option("--n", cfg.n, "rows of a (and of x, c)");
  cmd->add_option("--q", cfg.q, "rows of b (columns of x, c)");
  cmd->add_option("--n3", cfg.n3, "depth (mode-3 extent)");
  cmd->add_option("--m", cfg.m, "restart parameter");
  cmd->add_option("--tol", cfg.tol, "residual tolerance on ||c - M(x)||_F");
  cmd->add_option("--max-restarts", cfg.max_restarts, "restart budget");
  cmd->add_option("--mu", cfg.mu, "diffusion coefficient of the convdiff generator");
  cmd->add_option("--seed", cfg.seed, "seed for the right-hand side generator");
  cmd->add_option("--problem", *problem, "problem kind: convdiff | random | file")
      ->check(CLI::IsMember({"convdiff", "random", "file"}));
  cmd->add_option("--sign", *sign, "sign of the x*b term: plus | minus")
      ->check(CLI::IsMember({"plus", "minus"}));
  cmd->add_option("--a", cfg.path_a, "TT3D file for a (problem=file)");
  cmd->add_option("--b", cfg.path_b, "TT3D file for b (problem=file)");
  cmd->add_option("--c", cfg.path_c, "TT3D file for c (problem=file)");
  return cfg;
}

void finish_config(tsylv::ProblemConfig& cfg, const std::string& problem, const std::string& sign) {
  if (problem == "convdiff") cfg.kind = tsylv::ProblemKind::convdiff;
  if (problem == "random") cfg.kind = tsylv::ProblemKind::random_shifted;
  if (problem == "file") cfg.kind = tsylv::ProblemKind::file;
  cfg.sign = (sign == "plus") ? 1 : -1;
}

nlohmann::json config_json(const tsylv::ProblemConfig& cfg, const std::string& problem,
                           const std::string& sign) {
  return {{"n", cfg.n},     {"q", cfg.q},
          {"n3", cfg.n3},   {"m", cfg.m},
          {"tol", cfg.tol}, {"max_restarts", cfg.max_restarts},
          {"mu", cfg.mu},   {"seed", cfg.seed},
          {"problem", problem}, {"sign", sign}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"T-product Sylvester tensor equation solvers"};
  app.require_subcommand(1);

  // --- solve ---
  auto* solve = app.add_subcommand("solve", "solve a*x + sign*x*b = c");
  std::string method_name = "tbas";
  std::string problem = "convdiff";
  std::string sign = "minus";
  std::string out_path, save_x_path;
  solve->add_option("--method", method_name, "tbas | bas | tfom | tgmres | tbs")
      ->check(CLI::IsMember({"tbas", "bas", "tfom", "tgmres", "tbs"}));
  tsylv::ProblemConfig scfg = add_problem_options(solve, &problem, &sign);
  solve->add_option("--out", out_path, "write the JSON report here");
  solve->add_option("--save-x", save_x_path, "write the solution tensor (TT3D) here");

  // --- table1 ---
  auto* table1 = app.add_subcommand("table1", "run the stock convergence benchmark");
  std::string table_out;
  table1->add_option("--out", table_out, "write rows as JSON here");

  // --- gen ---
  auto* gen = app.add_subcommand("gen", "generate a problem and write TT3D files");
  std::string gen_problem = "convdiff";
  std::string gen_sign = "minus";
  std::string out_prefix;
  tsylv::ProblemConfig gcfg = add_problem_options(gen, &gen_problem, &gen_sign);
  gen->add_option("--out-prefix", out_prefix, "prefix for <prefix>_{a,b,c}.tt3d")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (solve->parsed()) {
      finish_config(scfg, problem, sign);
      const auto method = tsylv::parse_method(method_name);
      tsylv::RunOutcome out = tsylv::run_method(*method, scfg);
      std::cout << tsylv::format_rows({out.row});
      if (!out.report.warnings.empty()) {
        for (const auto& w : out.report.warnings) std::cout << "warning: " << w << "\n";
      }
      if (!out_path.empty()) {
        nlohmann::json j = nlohmann::json::parse(tsylv::to_json_string(out.report));
        j["config"] = config_json(scfg, problem, sign);
        std::ofstream(out_path) << j.dump(2) << "\n";
      }
      if (!save_x_path.empty()) tsylv::write_tt3d(out.x, save_x_path);
      return out.row.converged ? kExitOk : kExitNotConverged;
    }

    if (table1->parsed()) {
      const auto rows = tsylv::run_table1(&std::cerr);
      std::cout << tsylv::format_rows(rows);
      if (!table_out.empty()) std::ofstream(table_out) << tsylv::rows_to_json_string(rows) << "\n";
      for (const auto& r : rows) {
        if (!r.converged) return kExitNotConverged;
      }
      return kExitOk;
    }

    if (gen->parsed()) {
      finish_config(gcfg, gen_problem, gen_sign);
      const tsylv::SylvesterProblem p = tsylv::build_problem(gcfg);
      tsylv::write_tt3d(p.a, out_prefix + "_a.tt3d");
      tsylv::write_tt3d(p.b, out_prefix + "_b.tt3d");
      tsylv::write_tt3d(p.c, out_prefix + "_c.tt3d");
      std::cout << "wrote " << out_prefix << "_{a,b,c}.tt3d\n";
      return kExitOk;
    }
  } catch (const tsylv::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
