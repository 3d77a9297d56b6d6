#pragma once

#include <string>

#include "tsylv/tensor.hpp"

namespace tsylv {

enum class ProblemKind { convdiff, random_shifted, file };

/// Everything needed to build and solve one benchmark instance.
struct ProblemConfig {
  index_t n = 10;
  index_t q = 3;
  index_t n3 = 2;
  int m = 10;
  double tol = 1e-6;
  int max_restarts = 100;
  double mu = 1.0;
  std::uint64_t seed = 1;
  ProblemKind kind = ProblemKind::convdiff;
  int sign = -1;
  std::string path_a, path_b, path_c;  // kind == file

  void validate() const {
    if (n < 1 || q < 1 || n3 < 1 || m < 1) {
      throw DimensionMismatch("ProblemConfig: n, q, n3, m must be >= 1");
    }
    if (!(tol > 0.0)) throw DimensionMismatch("ProblemConfig: tol must be positive");
    if (!(mu > 0.0)) throw DimensionMismatch("ProblemConfig: mu must be positive");
    if (max_restarts < 1) throw DimensionMismatch("ProblemConfig: max_restarts must be >= 1");
    if (sign != 1 && sign != -1) throw DimensionMismatch("ProblemConfig: sign must be +/-1");
  }
};

struct SylvesterProblem {
  DenseTensor3 a, b, c;
};

/// Convection-diffusion coefficients: frontal slice i of a is
/// (mu/h1^2) tridiag(-1,2,-1) + (a_i/(4 h1)) P with a_i = i, h1 = 1/(n+1),
/// where P has diagonal 3, first superdiagonal -5, second superdiagonal 1
/// and first subdiagonal 1, truncated at the boundaries; b uses b_i = n3 + i
/// and h2 = 1/(q+1). The right-hand side is uniform [0,1) noise drawn from
/// the seeded generator in storage order.
SylvesterProblem gen_convdiff(const ProblemConfig& cfg);

/// Uniform [-1,1) tensors with the diagonal of every frontal slice of a and
/// b shifted by +n and +q, keeping the spectra well separated.
SylvesterProblem gen_random(const ProblemConfig& cfg);

/// Dispatch on cfg.kind (file kind reads TT3D tensors from cfg.path_*).
SylvesterProblem build_problem(const ProblemConfig& cfg);

}  // namespace tsylv
