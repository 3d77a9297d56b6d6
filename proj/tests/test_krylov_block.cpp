#include <doctest.h>

#include "oracles.hpp"
#include "test_util.hpp"
#include "tsylv/bas.hpp"
#include "tsylv/block_krylov.hpp"

using namespace tsylv;
using tsylv::testing::random_ctensor;
using tsylv::testing::random_tensor;
using tsylv::testing::random_shifted;

namespace {

/// E_m = [O, ..., O, I_s]: the block selector of the last block column.
template <typename T>
Tensor3<T> block_selector(index_t s, index_t m, index_t n3) {
  std::vector<Tensor3<T>> blocks(static_cast<std::size_t>(m), Tensor3<T>(s, s, n3));
  blocks.back() = identity_tensor<T>(s, n3);
  return hconcat(blocks);
}

template <typename T>
void check_tba_invariants(const Tensor3<T>& a, const BlockArnoldiStateT<T>& st, double tol) {
  const index_t m = st.steps, s = st.block_width, n3 = st.n3;
  const Tensor3<T> vb = st.assembled_basis(m);
  const Tensor3<T> vbt = t_transpose(vb);

  // (for4) orthonormality
  const Tensor3<T> gram = t_product(vbt, vb);
  CHECK(fro_dist(gram, identity_tensor<T>(m * s, n3)) <=
        tol * std::sqrt(static_cast<double>(m * s)));

  // (for1) block Arnoldi relation
  const Tensor3<T> avb = t_product(a, vb);
  const Tensor3<T> hm = st.hm();
  Tensor3<T> rel = avb - t_product(vb, hm);
  const Tensor3<T> hnext = st.hblocks[m - 1][m];  // H_{m+1,m}
  const Tensor3<T> tail = t_product(st.vblocks[m], t_product(hnext, block_selector<T>(s, m, n3)));
  rel -= tail;
  CHECK(fro_norm(rel) <= tol * fro_norm(a));

  // (for2) projection identity
  CHECK(fro_dist(t_product(t_product(vbt, a), vb), hm) <= tol * std::max(1.0, fro_norm(hm)));

  // (for3) extended projection identity
  const Tensor3<T> vb1 = st.assembled_basis(m + 1);
  const Tensor3<T> proj = t_product(t_product(t_transpose(vb1), a), vb);
  CHECK(fro_dist(proj, st.hm1()) <= tol * std::max(1.0, fro_norm(proj)));
}

}  // namespace

TEST_CASE("tubal block Arnoldi invariants on a random 8x8x3 operator") {
  Xoshiro256ss rng(70);
  const DenseTensor3 a = random_tensor(8, 8, 3, rng);
  const DenseTensor3 v = random_tensor(8, 2, 3, rng);
  const auto st = tubal_block_arnoldi(a, v, 3);
  REQUIRE(st.steps == 3);
  check_tba_invariants(a, st, 1e-9);

  // seed relation: R0 = V_1 * H_0
  CHECK(rel_error(t_product(st.vblocks[0], st.h0), v) < 1e-11);
}

TEST_CASE("n3 = 1 reduces to the classical block Arnoldi process") {
  Xoshiro256ss rng(71);
  const DenseTensor3 a = random_tensor(10, 10, 1, rng);
  const DenseTensor3 v = random_tensor(10, 2, 1, rng);
  const auto st = tubal_block_arnoldi(a, v, 3);
  check_tba_invariants(a, st, 1e-10);

  // The tensor relations, read slice-wise, are the matrix relations:
  // A Vb = Vb Hm + V_{m+1} H_{m+1,m} E^T with orthonormal Vb.
  const Eigen::MatrixXd vb = st.assembled_basis(3).slice(0);
  const Eigen::MatrixXd hm = st.hm().slice(0);
  Eigen::MatrixXd rel = a.slice(0) * vb - vb * hm;
  rel.rightCols(2) -= st.vblocks[3].slice(0) * st.hblocks[2][3].slice(0);
  CHECK(rel.norm() <= 1e-10 * a.slice(0).norm());
  CHECK((vb.transpose() * vb - Eigen::MatrixXd::Identity(6, 6)).norm() <= 1e-10);

  // Krylov span: the second block lies in span{v, a v}
  Eigen::MatrixXd span(10, 4);
  span << v.slice(0), a.slice(0) * v.slice(0);
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(span)
                                .householderQ() *
                            Eigen::MatrixXd::Identity(10, 4);
  const Eigen::MatrixXd v2 = st.vblocks[1].slice(0);
  CHECK((v2 - q * (q.transpose() * v2)).norm() <= 1e-10);
}

TEST_CASE("complex n3 = 1 instantiation satisfies the same invariants") {
  Xoshiro256ss rng(72);
  const CTensor3 a = random_ctensor(8, 8, 1, rng);
  const CTensor3 v = random_ctensor(8, 2, 1, rng);
  const auto st = tubal_block_arnoldi(a, v, 3);
  check_tba_invariants(a, st, 1e-9);
}

TEST_CASE("rank-deficient seed raises BlockBreakdown at step 1") {
  Xoshiro256ss rng(73);
  const DenseTensor3 a = random_tensor(8, 8, 2, rng);
  DenseTensor3 v = random_tensor(8, 2, 2, rng);
  for (index_t k = 0; k < 2; ++k) v.slice(k).col(1) = v.slice(k).col(0);
  try {
    tubal_block_arnoldi(a, v, 3);
    FAIL("expected BlockBreakdown");
  } catch (const BlockBreakdown& e) {
    CHECK(e.step() == 1);
  }
}

TEST_CASE("tbas_cycle: invariant block gives the exact solve at m = 1") {
  Xoshiro256ss rng(74);
  const index_t n = 8, s = 2, n3 = 2;
  const DenseTensor3 a = identity_tensor(n, n3);  // every block is invariant
  const DenseTensor3 b = random_shifted(s, n3, 3.0, rng);
  const DenseTensor3 r0 = random_tensor(n, s, n3, rng);
  const auto out = tbas_cycle(a, b, r0, 1, +1);
  CHECK(out.breakdown_exact);
  const DenseTensor3 lhs = t_product(a, out.update) + t_product(out.update, b);
  CHECK(fro_norm(r0 - lhs) <= 1e-10 * fro_norm(r0));
}

TEST_CASE("tbas_cycle at full subspace dimension matches the direct solver") {
  Xoshiro256ss rng(75);
  const index_t n = 6, q = 3, n3 = 2;
  const DenseTensor3 a = random_shifted(n, n3, 8.0, rng);
  const DenseTensor3 b = random_shifted(q, n3, -7.0, rng);
  const DenseTensor3 c = random_tensor(n, q, n3, rng);
  const auto out = tbas_cycle(a, b, c, static_cast<int>(n / q), -1);
  const DenseTensor3 direct = t_bartels_stewart(a, b, c, -1);
  CHECK(rel_error(out.update, direct) < 1e-8);
}

TEST_CASE("tbas_cycle estimate agrees with the explicit residual (12x12x2, s = 2, m = 3)") {
  Xoshiro256ss rng(76);
  const DenseTensor3 a = random_shifted(12, 2, 24.0, rng);
  const DenseTensor3 b = random_shifted(2, 2, -4.0, rng);
  const DenseTensor3 r0 = random_tensor(12, 2, 2, rng);
  const auto out = tbas_cycle(a, b, r0, 3, -1);
  const DenseTensor3 lhs = t_product(a, out.update) - t_product(out.update, b);
  const double expl = fro_norm(r0 - lhs);
  CHECK(std::abs(out.estimate - expl) <= 1e-8 * std::max(expl, 1e-12));
}

TEST_CASE("tbas_restarted recovers a constructed solution (30x30x4, q = 3, m = 5)") {
  Xoshiro256ss rng(77);
  const DenseTensor3 a = random_shifted(30, 4, 60.0, rng);
  const DenseTensor3 b = random_shifted(3, 4, -6.0, rng);
  const DenseTensor3 xstar = random_tensor(30, 3, 4, rng);
  const DenseTensor3 c = t_product(a, xstar) - t_product(xstar, b);
  const auto res = tbas_restarted<double>(a, b, c, std::nullopt, 5, 1e-10, 100, -1);
  CHECK(res.report.converged);
  CHECK(rel_error(res.x, xstar) < 1e-8);
  CHECK(res.report.block_width == 3);
}

TEST_CASE("tbas_restarted matches the Kronecker oracle at convergence") {
  Xoshiro256ss rng(78);
  const DenseTensor3 a = random_shifted(18, 2, 36.0, rng);
  const DenseTensor3 b = random_shifted(3, 2, -5.0, rng);
  const DenseTensor3 c = random_tensor(18, 3, 2, rng);
  const auto res = tbas_restarted<double>(a, b, c, std::nullopt, 4, 1e-10, 100, -1);
  REQUIRE(res.report.converged);
  const DenseTensor3 oracle = testing::sylvester_kron_oracle(a, b, c, -1);
  CHECK(rel_error(res.x, oracle) < 1e-8);
}

TEST_CASE("tbas_restarted flags stagnation and raises MaxRestartsExceeded") {
  // A = I + N with N the down-shift: FOM(1)-style cycles move the residual
  // from e_k to e_{k+1} without shrinking it.
  const index_t n = 24;
  DenseTensor3 a(n, n, 1);
  a.slice(0).setIdentity();
  for (index_t i = 0; i + 1 < n; ++i) a.slice(0)(i + 1, i) = 1.0;
  DenseTensor3 b(1, 1, 1);  // zero
  DenseTensor3 c(n, 1, 1);
  c(0, 0, 0) = 1.0;
  try {
    tbas_restarted<double>(a, b, c, std::nullopt, 1, 1e-12, 5, +1);
    FAIL("expected MaxRestartsExceeded");
  } catch (const MaxRestartsExceeded& e) {
    CHECK_FALSE(e.report().converged);
    CHECK_FALSE(e.report().warnings.empty());
  }
}

TEST_CASE("bas_solve agrees with tbas and satisfies the assembled residual") {
  Xoshiro256ss rng(79);
  const DenseTensor3 a = random_shifted(16, 2, 32.0, rng);
  const DenseTensor3 b = random_shifted(3, 2, -6.0, rng);
  const DenseTensor3 c = random_tensor(16, 3, 2, rng);
  const double tol = 1e-8;

  const BasOutcome bas = bas_solve(a, b, c, 4, tol, 100, -1);
  CHECK(bas.report.converged);
  CHECK(bas.report.block_width == 3);
  const double expl = fro_norm(sylvester_residual(a, b, c, bas.x, -1));
  CHECK(expl <= tol);

  // iterations are the max over the per-slice solves
  index_t max_its = 0;
  for (const auto& r : bas.slice_reports) max_its = std::max(max_its, r.iterations);
  CHECK(bas.report.iterations == max_its);

  const auto tbas = tbas_restarted<double>(a, b, c, std::nullopt, 4, tol, 100, -1);
  CHECK(rel_error(bas.x, tbas.x) < 1e-5);
}

TEST_CASE("complex depth-1 tbas solves a complex Sylvester matrix equation") {
  Xoshiro256ss rng(80);
  const CTensor3 a = testing::random_shifted_c(12, 1, 24.0, rng);
  const CTensor3 b = testing::random_shifted_c(3, 1, -6.0, rng);
  const CTensor3 xstar = random_ctensor(12, 3, 1, rng);
  const CTensor3 c = t_product(a, xstar) - t_product(xstar, b);
  const auto res = tbas_restarted<cxd>(a, b, c, std::nullopt, 4, 1e-10, 100, -1);
  CHECK(res.report.converged);
  CHECK(rel_error(res.x, xstar) < 1e-8);
}
