#pragma once

#include <chrono>
#include <cmath>
#include <limits>
#include <optional>

#include <Eigen/Dense>

#include "tsylv/linear_operator.hpp"
#include "tsylv/report.hpp"
#include "tsylv/tproduct.hpp"

namespace tsylv {

/// Basis and Hessenberg data produced by the tensor Arnoldi process.
/// `basis` holds V_1..V_steps plus V_{steps+1} unless a lucky breakdown
/// truncated the loop; `h` is the (steps+1) x steps Hessenberg matrix.
struct GlobalArnoldiState {
  std::vector<DenseTensor3> basis;
  Eigen::MatrixXd h;
  double beta = 0.0;
  int steps = 0;
  bool lucky_breakdown = false;

  Eigen::MatrixXd h_square() const { return h.topRows(steps); }
};

namespace detail {

/// Incremental Arnoldi loop: modified Gram-Schmidt with one
/// reorthogonalization pass, breakdown threshold 1e-12 * beta.
class GlobalArnoldiBuilder {
 public:
  GlobalArnoldiBuilder(const LinearOperator& op, const DenseTensor3& seed) : op_(op) {
    beta_ = fro_norm(seed);
    if (!(beta_ > 0.0) || !std::isfinite(beta_)) {
      throw ZeroSeed("t_arnoldi: seed tensor has zero (or non-finite) norm");
    }
    basis_.push_back((1.0 / beta_) * seed);
  }

  double beta() const noexcept { return beta_; }
  int steps() const noexcept { return steps_; }
  bool lucky() const noexcept { return lucky_; }
  const std::vector<DenseTensor3>& basis() const noexcept { return basis_; }

  /// Hessenberg entry h(i, j), 0-based, i <= j+1.
  double h(index_t i, index_t j) const { return hcols_[static_cast<std::size_t>(j)](i); }

  Eigen::MatrixXd h_tilde() const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(steps_ + 1, steps_);
    for (int j = 0; j < steps_; ++j) {
      m.col(j).head(j + 2) = hcols_[static_cast<std::size_t>(j)];
    }
    return m;
  }

  /// Run one Arnoldi step. Returns false (and truncates) on lucky breakdown.
  bool step() {
    if (lucky_) return false;
    const int j = steps_;
    DenseTensor3 w = op_.apply(basis_[static_cast<std::size_t>(j)]);
    Eigen::VectorXd hcol = Eigen::VectorXd::Zero(j + 2);
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i <= j; ++i) {
        const double c = inner(basis_[static_cast<std::size_t>(i)], w);
        hcol(i) += c;
        w.vec() -= c * basis_[static_cast<std::size_t>(i)].vec();
      }
    }
    const double hnext = fro_norm(w);
    hcol(j + 1) = hnext;
    hcols_.push_back(hcol);
    ++steps_;
    if (hnext <= 1e-12 * beta_) {
      lucky_ = true;
      return false;
    }
    basis_.push_back((1.0 / hnext) * w);
    return true;
  }

 private:
  const LinearOperator& op_;
  std::vector<DenseTensor3> basis_;
  std::vector<Eigen::VectorXd> hcols_;
  double beta_ = 0.0;
  int steps_ = 0;
  bool lucky_ = false;
};

}  // namespace detail

/// Tensor Arnoldi process: orthonormal basis of the tensor Krylov subspace
/// of (op, seed) with scalar Hessenberg coefficients h(i,j) = <V_i, M(V_j)>.
inline GlobalArnoldiState t_arnoldi(const LinearOperator& op, const DenseTensor3& seed, int m) {
  if (m < 1) throw DimensionMismatch("t_arnoldi: m must be >= 1");
  detail::GlobalArnoldiBuilder builder(op, seed);
  for (int j = 0; j < m; ++j) {
    if (!builder.step()) break;
  }
  GlobalArnoldiState st;
  st.basis = builder.basis();
  st.h = builder.h_tilde();
  st.beta = builder.beta();
  st.steps = builder.steps();
  st.lucky_breakdown = builder.lucky();
  return st;
}

/// QR of the rectangular Hessenberg matrix via plane rotations, plus the
/// transformed right-hand side g = beta * q^T e_1. |gamma_last| is the
/// minimal residual norm of the Hessenberg least squares problem.
struct GmresLsqState {
  Eigen::MatrixXd q;
  Eigen::MatrixXd u;
  Eigen::VectorXd g;
  double gamma_last = 0.0;
};

inline GmresLsqState gmres_lsq(const Eigen::MatrixXd& htilde, double beta) {
  const index_t m = htilde.cols();
  if (htilde.rows() != m + 1) {
    throw DimensionMismatch("gmres_lsq: expected an (m+1) x m Hessenberg matrix");
  }
  GmresLsqState st;
  st.u = htilde;
  Eigen::MatrixXd rot = Eigen::MatrixXd::Identity(m + 1, m + 1);  // product of rotations
  st.g = Eigen::VectorXd::Zero(m + 1);
  st.g(0) = beta;
  for (index_t j = 0; j < m; ++j) {
    const double a = st.u(j, j), b = st.u(j + 1, j);
    const double r = std::hypot(a, b);
    const double c = (r == 0.0) ? 1.0 : a / r;
    const double s = (r == 0.0) ? 0.0 : b / r;
    for (index_t col = j; col < m; ++col) {
      const double x = st.u(j, col), y = st.u(j + 1, col);
      st.u(j, col) = c * x + s * y;
      st.u(j + 1, col) = -s * x + c * y;
    }
    rot.middleRows(j, 2) = (Eigen::Matrix2d() << c, s, -s, c).finished() * rot.middleRows(j, 2);
    const double gx = st.g(j), gy = st.g(j + 1);
    st.g(j) = c * gx + s * gy;
    st.g(j + 1) = -s * gx + c * gy;
  }
  st.q = rot.transpose();
  st.gamma_last = st.g(m);
  return st;
}

/// One inner cycle of an iterative method: the correction to add to the
/// current iterate, the cheap residual estimate, and the per-step estimate
/// trail. `steps` is the number of Arnoldi steps actually run.
struct CycleOutcome {
  DenseTensor3 update;
  double estimate = 0.0;
  int steps = 0;
  std::vector<double> estimates;
  bool lucky_breakdown = false;
};

/// One tFOM cycle on residual r0: Galerkin condition H_m y = ||r0|| e_1 with
/// cheap residual estimate h(m+1,m) |y_m|. Steps stop early once the
/// estimate falls below `early_tol` (0 disables early exit).
inline CycleOutcome tfom_cycle(const LinearOperator& op, const DenseTensor3& r0, int m,
                               double early_tol = 0.0) {
  if (m < 1) throw DimensionMismatch("tfom_cycle: m must be >= 1");
  detail::GlobalArnoldiBuilder builder(op, r0);
  CycleOutcome out;
  Eigen::VectorXd y;
  bool have_y = false;
  for (int j = 1; j <= m; ++j) {
    const bool advanced = builder.step();
    const Eigen::MatrixXd htilde = builder.h_tilde();
    const Eigen::MatrixXd hj = htilde.topRows(j);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(hj);
    double est = std::numeric_limits<double>::quiet_NaN();
    if (lu.isInvertible()) {
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(j);
      rhs(0) = builder.beta();
      y = lu.solve(rhs);
      have_y = true;
      est = htilde(j, j - 1) * std::abs(y(j - 1));
    } else {
      have_y = false;
    }
    out.estimates.push_back(est);
    if (!advanced || (early_tol > 0.0 && have_y && est <= early_tol)) break;
  }
  if (!have_y) {
    throw SingularProjection(
        "tfom_cycle: projected Hessenberg system singular to working precision");
  }
  out.steps = builder.steps();
  out.lucky_breakdown = builder.lucky();
  out.estimate = out.estimates.back();
  std::vector<DenseTensor3> vm(builder.basis().begin(),
                               builder.basis().begin() + out.steps);
  out.update = basis_combine(vm, y);
  return out;
}

/// One tGMRES cycle on residual r0: minimal-residual condition solved by an
/// incrementally updated Givens QR of the Hessenberg matrix; the estimate
/// |gamma_{j+1}| is non-increasing within the cycle.
inline CycleOutcome tgmres_cycle(const LinearOperator& op, const DenseTensor3& r0, int m,
                                 double early_tol = 0.0) {
  if (m < 1) throw DimensionMismatch("tgmres_cycle: m must be >= 1");
  detail::GlobalArnoldiBuilder builder(op, r0);
  CycleOutcome out;
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(m + 1, m);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(m + 1);
  Eigen::VectorXd cs(m), sn(m);
  g(0) = builder.beta();
  int j = 0;
  for (; j < m;) {
    const bool advanced = builder.step();
    u.col(j).head(j + 2) = builder.h_tilde().col(j).head(j + 2);
    for (int i = 0; i < j; ++i) {
      const double x = u(i, j), y = u(i + 1, j);
      u(i, j) = cs(i) * x + sn(i) * y;
      u(i + 1, j) = -sn(i) * x + cs(i) * y;
    }
    const double a = u(j, j), b = u(j + 1, j);
    const double r = std::hypot(a, b);
    cs(j) = (r == 0.0) ? 1.0 : a / r;
    sn(j) = (r == 0.0) ? 0.0 : b / r;
    u(j, j) = r;
    u(j + 1, j) = 0.0;
    const double gx = g(j);
    g(j) = cs(j) * gx;
    g(j + 1) = -sn(j) * gx;
    ++j;
    out.estimates.push_back(std::abs(g(j)));
    if (!advanced || (early_tol > 0.0 && std::abs(g(j)) <= early_tol)) break;
  }
  const Eigen::VectorXd y =
      u.topLeftCorner(j, j).triangularView<Eigen::Upper>().solve(g.head(j));
  out.steps = builder.steps();
  out.lucky_breakdown = builder.lucky();
  out.estimate = out.estimates.back();
  std::vector<DenseTensor3> vm(builder.basis().begin(), builder.basis().begin() + out.steps);
  out.update = basis_combine(vm, y);
  return out;
}

enum class KrylovMethod { tfom, tgmres };

inline const char* method_name(KrylovMethod m) {
  return m == KrylovMethod::tfom ? "tfom" : "tgmres";
}

/// Restarted tFOM / tGMRES driver for op(x) = c. Inner iterations are gated
/// by the cheap estimates; the explicit residual is recomputed at every
/// restart boundary and is the sole convergence authority.
struct RestartedSolveResult {
  DenseTensor3 x;
  SolveReport report;
};

inline RestartedSolveResult restarted_solve(const LinearOperator& op, const DenseTensor3& c,
                                            std::optional<DenseTensor3> x0, int m, double tol,
                                            int max_restarts, KrylovMethod method) {
  if (m < 1 || max_restarts < 1) {
    throw DimensionMismatch("restarted_solve: m and max_restarts must be >= 1");
  }
  if (c.n1() != op.n || c.n2() != op.s || c.n3() != op.n3) {
    throw DimensionMismatch("restarted_solve: right-hand side does not match operator domain");
  }
  const auto t0 = std::chrono::steady_clock::now();
  SolveReport rep;
  rep.method = method_name(method);
  rep.n = op.n;
  rep.s = op.s;
  rep.n3 = op.n3;
  rep.m = m;
  rep.tol = tol;

  DenseTensor3 x = x0 ? std::move(*x0) : DenseTensor3(op.n, op.s, op.n3);
  DenseTensor3 r = c - op.apply(x);
  double nr = fro_norm(r);
  rep.residual_history.push_back(nr);

  DenseTensor3 best_x = x;
  double best_nr = nr;
  const auto elapsed_ms = [&t0] {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
  };

  if (nr < tol) {
    rep.converged = true;
    rep.wall_time_ms = elapsed_ms();
    return {std::move(x), std::move(rep)};
  }

  for (int cycle = 1; cycle <= max_restarts; ++cycle) {
    CycleOutcome out = (method == KrylovMethod::tfom) ? tfom_cycle(op, r, m, tol)
                                                      : tgmres_cycle(op, r, m, tol);
    x += out.update;
    r = c - op.apply(x);
    nr = fro_norm(r);
    rep.iterations += out.steps;
    rep.restarts = cycle;
    rep.residual_history.insert(rep.residual_history.end(), out.estimates.begin(),
                                out.estimates.end());
    rep.residual_history.push_back(nr);
    if (nr < best_nr) {
      best_nr = nr;
      best_x = x;
    }
    if (nr < tol) {
      rep.converged = true;
      rep.wall_time_ms = elapsed_ms();
      return {std::move(x), std::move(rep)};
    }
  }
  rep.wall_time_ms = elapsed_ms();
  throw MaxRestartsExceeded("restarted_solve(" + rep.method + "): residual " +
                                std::to_string(best_nr) + " above tol after " +
                                std::to_string(max_restarts) + " restarts",
                            std::move(best_x), std::move(rep));
}

}  // namespace tsylv
