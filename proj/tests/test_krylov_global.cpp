#include <doctest.h>

#include "test_util.hpp"
#include "tsylv/global_krylov.hpp"

using namespace tsylv;
using tsylv::testing::random_tensor;
using tsylv::testing::random_shifted;

namespace {

/// Well-posed random Sylvester operator (spectra separated by shifts).
struct TestProblem {
  DenseTensor3 a, b, c;
  LinearOperator op;
};

TestProblem make_problem(index_t n, index_t s, index_t n3, int sign, Xoshiro256ss& rng) {
  TestProblem p;
  p.a = random_shifted(n, n3, 2.0 * static_cast<double>(n), rng);
  p.b = random_shifted(s, n3, (sign > 0 ? 1.0 : -1.0) * 2.0 * static_cast<double>(s), rng);
  p.c = random_tensor(n, s, n3, rng);
  p.op = make_sylvester_operator(p.a, p.b, sign);
  return p;
}

void check_arnoldi_invariants(const LinearOperator& op, const GlobalArnoldiState& st,
                              double tol) {
  // orthonormality through the T-diamond product
  std::vector<DenseTensor3> vm(st.basis.begin(), st.basis.begin() + st.steps);
  const Eigen::MatrixXd gram = t_diamond(vm, vm);
  CHECK((gram - Eigen::MatrixXd::Identity(st.steps, st.steps)).norm() <= tol);

  // Hessenberg structure
  for (int i = 0; i < st.steps + 1; ++i) {
    for (int j = 0; j < st.steps; ++j) {
      if (i > j + 1) CHECK(st.h(i, j) == 0.0);
    }
  }

  // Arnoldi relation, column by column: M(V_j) = sum_{i <= j+1} h(i,j) V_i
  for (int j = 0; j < st.steps; ++j) {
    DenseTensor3 w = op.apply(st.basis[j]);
    const double scale = std::max(fro_norm(w), 1e-300);
    for (int i = 0; i <= j + 1 && i < static_cast<int>(st.basis.size()); ++i) {
      w.vec() -= st.h(i, j) * st.basis[i].vec();
    }
    CHECK(fro_norm(w) <= tol * scale);
  }
}

}  // namespace

TEST_CASE("sylvester operator is linear and matches the t-product definition") {
  Xoshiro256ss rng(50);
  TestProblem p = make_problem(8, 3, 3, +1, rng);
  const DenseTensor3 x = random_tensor(8, 3, 3, rng);
  const DenseTensor3 y = random_tensor(8, 3, 3, rng);

  const DenseTensor3 direct = t_product(p.a, x) + t_product(x, p.b);
  CHECK(rel_error(p.op.apply(x), direct) < 1e-12);

  const DenseTensor3 lhs = p.op.apply(2.0 * x - 0.5 * y);
  const DenseTensor3 rhs = 2.0 * p.op.apply(x) - 0.5 * p.op.apply(y);
  CHECK(rel_error(lhs, rhs) < 1e-12);
}

TEST_CASE("t_arnoldi: first basis tensor is the normalized seed") {
  Xoshiro256ss rng(51);
  TestProblem p = make_problem(6, 2, 2, +1, rng);
  const DenseTensor3 seed = random_tensor(6, 2, 2, rng);
  const GlobalArnoldiState st = t_arnoldi(p.op, seed, 1);
  CHECK(rel_error(st.basis[0], (1.0 / fro_norm(seed)) * seed) < 1e-14);
  CHECK(st.beta == doctest::Approx(fro_norm(seed)));
}

TEST_CASE("t_arnoldi on the identity operator: h = [[1],[0]] and lucky breakdown") {
  Xoshiro256ss rng(52);
  const LinearOperator id = make_identity_operator(5, 2, 3);
  const DenseTensor3 seed = random_tensor(5, 2, 3, rng);
  const GlobalArnoldiState st = t_arnoldi(id, seed, 3);
  CHECK(st.steps == 1);
  CHECK(st.lucky_breakdown);
  REQUIRE(st.h.rows() == 2);
  REQUIRE(st.h.cols() == 1);
  CHECK(st.h(0, 0) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(std::abs(st.h(1, 0)) <= 1e-12);
}

TEST_CASE("t_arnoldi invariants on a random Sylvester operator, m = 5") {
  Xoshiro256ss rng(53);
  TestProblem p = make_problem(12, 3, 2, +1, rng);
  const GlobalArnoldiState st = t_arnoldi(p.op, p.c, 5);
  REQUIRE(st.steps == 5);
  check_arnoldi_invariants(p.op, st, 1e-10);
}

TEST_CASE("t_arnoldi rejects a zero seed") {
  Xoshiro256ss rng(54);
  TestProblem p = make_problem(6, 2, 2, +1, rng);
  CHECK_THROWS_AS(t_arnoldi(p.op, DenseTensor3(6, 2, 2), 3), ZeroSeed);
}

TEST_CASE("basis_combine over an Arnoldi basis is an isometry") {
  Xoshiro256ss rng(55);
  TestProblem p = make_problem(10, 2, 3, +1, rng);
  const GlobalArnoldiState st = t_arnoldi(p.op, p.c, 6);
  std::vector<DenseTensor3> vm(st.basis.begin(), st.basis.begin() + st.steps);

  Eigen::VectorXd y(st.steps);
  for (int i = 0; i < st.steps; ++i) y(i) = rng.uniform_sym();
  const double norm_combined = fro_norm(basis_combine(vm, y));
  CHECK(std::abs(norm_combined - y.norm()) <= 1e-12 * y.norm());

  // and the diamond Gram matrix is the identity
  const Eigen::MatrixXd gram = t_diamond(vm, vm);
  CHECK((gram - Eigen::MatrixXd::Identity(st.steps, st.steps)).norm() <= 1e-10);
}

TEST_CASE("tfom_cycle on the identity operator solves in one step") {
  Xoshiro256ss rng(56);
  const LinearOperator id = make_identity_operator(4, 2, 2);
  const DenseTensor3 r0 = random_tensor(4, 2, 2, rng);
  const CycleOutcome out = tfom_cycle(id, r0, 3);
  CHECK(out.steps == 1);
  CHECK(rel_error(out.update, r0) < 1e-12);
  CHECK(out.estimate <= 1e-12 * fro_norm(r0));
}

TEST_CASE("lucky breakdown inside tfom gives the exact solve") {
  Xoshiro256ss rng(57);
  // Operator with a 2-dimensional invariant subspace containing the seed:
  // M(x) = x + <v1, x> v2 where v1, v2 are orthonormal.
  DenseTensor3 v1 = random_tensor(6, 2, 2, rng);
  v1 *= 1.0 / fro_norm(v1);
  DenseTensor3 v2 = random_tensor(6, 2, 2, rng);
  v2.vec() -= inner(v1, v2) * v1.vec();
  v2 *= 1.0 / fro_norm(v2);
  LinearOperator op;
  op.n = 6;
  op.s = 2;
  op.n3 = 2;
  op.apply_fn = [v1, v2](const DenseTensor3& x) {
    DenseTensor3 y = x;
    y.vec() += inner(v1, x) * v2.vec();
    return y;
  };

  const DenseTensor3 r0 = v1;
  const CycleOutcome out = tfom_cycle(op, r0, 5);
  CHECK(out.lucky_breakdown);
  CHECK(out.steps <= 3);
  const double expl = fro_norm(r0 - op.apply(out.update));
  CHECK(expl <= 1e-10 * fro_norm(r0));
}

TEST_CASE("tgmres_cycle on the identity operator has zero residual after one step") {
  Xoshiro256ss rng(58);
  const LinearOperator id = make_identity_operator(4, 2, 2);
  const DenseTensor3 r0 = random_tensor(4, 2, 2, rng);
  const CycleOutcome out = tgmres_cycle(id, r0, 3);
  CHECK(out.steps == 1);
  CHECK(out.estimate <= 1e-12 * fro_norm(r0));
  CHECK(rel_error(out.update, r0) < 1e-12);
}

TEST_CASE("tgmres exhausts the full subspace on a tiny problem") {
  Xoshiro256ss rng(59);
  TestProblem p = make_problem(2, 2, 2, +1, rng);
  const int full_dim = 2 * 2 * 2;
  const CycleOutcome out = tgmres_cycle(p.op, p.c, full_dim);
  const double expl = fro_norm(p.c - p.op.apply(out.update));
  CHECK(expl <= 1e-10 * fro_norm(p.c));
}

TEST_CASE("gmres_lsq state invariants") {
  Xoshiro256ss rng(60);
  TestProblem p = make_problem(10, 2, 2, +1, rng);
  const GlobalArnoldiState st = t_arnoldi(p.op, p.c, 5);
  const GmresLsqState lsq = gmres_lsq(st.h, st.beta);

  CHECK((lsq.q * lsq.u - st.h).norm() <= 1e-12 * st.h.norm());
  CHECK((lsq.q.transpose() * lsq.q - Eigen::MatrixXd::Identity(6, 6)).norm() <= 1e-13);

  // |gamma_last| equals the true minimal residual of the least squares problem
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(6);
  rhs(0) = st.beta;
  const Eigen::VectorXd y = st.h.colPivHouseholderQr().solve(rhs);
  CHECK(std::abs(lsq.gamma_last) ==
        doctest::Approx((rhs - st.h * y).norm()).epsilon(1e-10));
}

TEST_CASE("estimates match explicit residuals at cycle boundaries (both methods)") {
  Xoshiro256ss rng(61);
  for (int trial = 0; trial < 5; ++trial) {
    TestProblem p = make_problem(20, 3, 2, trial % 2 == 0 ? 1 : -1, rng);
    DenseTensor3 r = p.c;
    for (int cycle = 0; cycle < 3; ++cycle) {
      const CycleOutcome fom = tfom_cycle(p.op, r, 4);
      const double fom_expl = fro_norm(r - p.op.apply(fom.update));
      CHECK(std::abs(fom.estimate - fom_expl) <= 1e-8 * std::max(fom_expl, 1e-12));

      const CycleOutcome gm = tgmres_cycle(p.op, r, 4);
      const double gm_expl = fro_norm(r - p.op.apply(gm.update));
      CHECK(std::abs(gm.estimate - gm_expl) <= 1e-8 * std::max(gm_expl, 1e-12));

      // tGMRES optimality vs tFOM at equal m
      CHECK(gm.estimate <= fom.estimate * (1.0 + 1e-10));

      // inner-cycle monotonicity of the tGMRES estimates
      for (std::size_t i = 1; i < gm.estimates.size(); ++i) {
        CHECK(gm.estimates[i] <= gm.estimates[i - 1] * (1.0 + 1e-12));
      }

      // advance the outer loop with the tGMRES update
      r = r - p.op.apply(gm.update);
    }
  }
}

TEST_CASE("restarted_solve recovers a constructed solution") {
  Xoshiro256ss rng(62);
  TestProblem p = make_problem(24, 3, 2, +1, rng);
  const DenseTensor3 xstar = random_tensor(24, 3, 2, rng);
  const DenseTensor3 c = p.op.apply(xstar);
  for (KrylovMethod method : {KrylovMethod::tfom, KrylovMethod::tgmres}) {
    const auto res = restarted_solve(p.op, c, std::nullopt, 8, 1e-10, 60, method);
    CHECK(res.report.converged);
    CHECK(rel_error(res.x, xstar) < 1e-8);
    CHECK(res.report.iterations >= 1);
    CHECK(res.report.residual_history.back() < 1e-10);
  }
}

TEST_CASE("restarted_solve returns immediately from an exact initial guess") {
  Xoshiro256ss rng(63);
  TestProblem p = make_problem(10, 2, 2, +1, rng);
  const DenseTensor3 xstar = random_tensor(10, 2, 2, rng);
  const DenseTensor3 c = p.op.apply(xstar);
  const auto res =
      restarted_solve(p.op, c, xstar, 5, 1e-8, 10, KrylovMethod::tgmres);
  CHECK(res.report.converged);
  CHECK(res.report.restarts == 0);
  CHECK(res.report.iterations == 0);
  CHECK(fro_dist(res.x, xstar) == 0.0);
}

TEST_CASE("restart budget exhaustion raises MaxRestartsExceeded with the best iterate") {
  Xoshiro256ss rng(64);
  TestProblem p = make_problem(30, 3, 2, +1, rng);
  try {
    restarted_solve(p.op, p.c, std::nullopt, 2, 1e-14, 2, KrylovMethod::tgmres);
    FAIL("expected MaxRestartsExceeded");
  } catch (const MaxRestartsExceeded& e) {
    CHECK(e.report().restarts == 2);
    CHECK(e.report().iterations == 4);
    CHECK_FALSE(e.report().converged);
    // the best iterate is a genuine improvement over x0 = 0
    const double res_norm = fro_norm(p.c - p.op.apply(e.best_iterate()));
    CHECK(res_norm < fro_norm(p.c));
  }
}

TEST_CASE("residual history interleaves estimates and explicit boundaries") {
  Xoshiro256ss rng(65);
  TestProblem p = make_problem(16, 2, 2, +1, rng);
  const auto res = restarted_solve(p.op, p.c, std::nullopt, 3, 1e-9, 50, KrylovMethod::tfom);
  CHECK(res.report.converged);
  // initial explicit + per cycle (estimates + explicit)
  const std::size_t expected =
      1 + static_cast<std::size_t>(res.report.iterations + res.report.restarts);
  CHECK(res.report.residual_history.size() == expected);
}
