#include "tsylv/problems.hpp"

#include "tsylv/io.hpp"
#include "tsylv/rng.hpp"

namespace tsylv {

namespace {

// tridiag(-1, 2, -1) + (conv/4h) * [3 on diag, -5 above, 1 two above, 1 below]
void fill_convdiff_slice(DenseTensor3& t, index_t k, index_t d, double diffusion,
                         double convection) {
  auto s = t.slice(k);
  for (index_t r = 0; r < d; ++r) {
    s(r, r) = 2.0 * diffusion + 3.0 * convection;
    if (r >= 1) s(r, r - 1) = -diffusion + 1.0 * convection;
    if (r + 1 < d) s(r, r + 1) = -diffusion - 5.0 * convection;
    if (r + 2 < d) s(r, r + 2) = 1.0 * convection;
  }
}

void fill_uniform01(DenseTensor3& t, Xoshiro256ss& rng) {
  for (index_t i = 0; i < t.size(); ++i) t.data()[i] = rng.uniform01();
}

void fill_uniform_sym(DenseTensor3& t, Xoshiro256ss& rng) {
  for (index_t i = 0; i < t.size(); ++i) t.data()[i] = rng.uniform_sym();
}

}  // namespace

SylvesterProblem gen_convdiff(const ProblemConfig& cfg) {
  cfg.validate();
  if (cfg.n < 5) {
    throw DimensionTooSmall("gen_convdiff: n must be >= 5 to carry the full stencil");
  }
  if (cfg.q < 3) {
    throw DimensionTooSmall("gen_convdiff: q must be >= 3 to carry the convection stencil");
  }
  const double h1 = 1.0 / static_cast<double>(cfg.n + 1);
  const double h2 = 1.0 / static_cast<double>(cfg.q + 1);

  SylvesterProblem p{DenseTensor3(cfg.n, cfg.n, cfg.n3), DenseTensor3(cfg.q, cfg.q, cfg.n3),
                     DenseTensor3(cfg.n, cfg.q, cfg.n3)};
  for (index_t k = 0; k < cfg.n3; ++k) {
    const double ai = static_cast<double>(k + 1);            // a_i = i
    const double bi = static_cast<double>(cfg.n3 + k + 1);   // b_i = n3 + i
    fill_convdiff_slice(p.a, k, cfg.n, cfg.mu / (h1 * h1), ai / (4.0 * h1));
    fill_convdiff_slice(p.b, k, cfg.q, cfg.mu / (h2 * h2), bi / (4.0 * h2));
  }
  Xoshiro256ss rng(cfg.seed);
  fill_uniform01(p.c, rng);
  return p;
}

SylvesterProblem gen_random(const ProblemConfig& cfg) {
  cfg.validate();
  SylvesterProblem p{DenseTensor3(cfg.n, cfg.n, cfg.n3), DenseTensor3(cfg.q, cfg.q, cfg.n3),
                     DenseTensor3(cfg.n, cfg.q, cfg.n3)};
  Xoshiro256ss rng(cfg.seed);
  fill_uniform_sym(p.a, rng);
  fill_uniform_sym(p.b, rng);
  fill_uniform_sym(p.c, rng);
  // Shift by a multiple of the identity tensor (first frontal slice only):
  // this moves the spectrum of every spectral slice away from zero. Adding
  // the shift to all frontal slices would cancel in every spectral slice
  // but the first and leave near-singular subproblems behind.
  p.a.slice(0).diagonal().array() += static_cast<double>(cfg.n);
  p.b.slice(0).diagonal().array() += static_cast<double>(cfg.q);
  return p;
}

SylvesterProblem build_problem(const ProblemConfig& cfg) {
  switch (cfg.kind) {
    case ProblemKind::convdiff:
      return gen_convdiff(cfg);
    case ProblemKind::random_shifted:
      return gen_random(cfg);
    case ProblemKind::file: {
      SylvesterProblem p{read_tt3d(cfg.path_a), read_tt3d(cfg.path_b), read_tt3d(cfg.path_c)};
      if (p.a.n1() != p.a.n2() || p.b.n1() != p.b.n2() || p.c.n1() != p.a.n1() ||
          p.c.n2() != p.b.n1() || p.a.n3() != p.b.n3() || p.a.n3() != p.c.n3()) {
        throw DimensionMismatch("build_problem: tensors from files do not conform");
      }
      return p;
    }
  }
  throw DimensionMismatch("build_problem: unknown problem kind");
}

}  // namespace tsylv
