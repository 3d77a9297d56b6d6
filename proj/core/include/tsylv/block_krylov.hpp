#pragma once

#include <chrono>
#include <optional>

#include "tsylv/block.hpp"
#include "tsylv/report.hpp"
#include "tsylv/sylvester_direct.hpp"

namespace tsylv {

namespace detail {

/// Incremental tubal block Arnoldi, kept entirely in the spectral domain:
/// one entry per independent slice, per block. Mirrored slices are
/// reconstructed only when dense tensors are materialized.
template <typename T>
class TubalBlockArnoldiBuilder {
 public:
  TubalBlockArnoldiBuilder(const SpectralTensor& sa, const SpectralTensor& sv)
      : n_(sa.n1()), s_(sv.n2()), n3_(sa.n3()), indep_(independent_count<T>(sa.n3())) {
    if (sa.n1() != sa.n2()) throw DimensionMismatch("tubal block Arnoldi: a must be square");
    if (sv.n1() != n_ || sv.n3() != n3_) {
      throw DimensionMismatch("tubal block Arnoldi: seed extents do not match a");
    }
    if (s_ > n_) throw DimensionMismatch("tubal block Arnoldi: block width exceeds n");
    sa_.reserve(static_cast<std::size_t>(indep_));
    for (index_t k = 0; k < indep_; ++k) sa_.push_back(sa.slice(k));
    std::vector<Eigen::MatrixXcd> seed(static_cast<std::size_t>(indep_));
    for (index_t k = 0; k < indep_; ++k) seed[static_cast<std::size_t>(k)] = sv.slice(k);
    SpectralQr qr;
    try {
      qr = spectral_gram_schmidt(seed);
    } catch (const SingularTube& e) {
      throw BlockBreakdown(std::string("tubal block Arnoldi: seed block rank deficient (") +
                               e.what() + ")",
                           1);
    }
    v_.push_back(std::move(qr.q));
    h0_ = std::move(qr.r);
  }

  index_t n() const noexcept { return n_; }
  index_t block_width() const noexcept { return s_; }
  index_t n3() const noexcept { return n3_; }
  index_t indep() const noexcept { return indep_; }
  int steps() const noexcept { return steps_; }
  bool breakdown() const noexcept { return breakdown_; }
  index_t breakdown_step() const noexcept { return breakdown_step_; }

  const std::vector<Eigen::MatrixXcd>& vblock(index_t i) const {
    return v_[static_cast<std::size_t>(i)];
  }
  index_t vblock_count() const noexcept { return static_cast<index_t>(v_.size()); }
  const std::vector<Eigen::MatrixXcd>& h0() const noexcept { return h0_; }

  /// H_{i+1,j+1} slices (0-based block indices, i <= j+1).
  const std::vector<Eigen::MatrixXcd>& hblock(index_t i, index_t j) const {
    return hcols_[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
  }
  index_t hcol_count() const noexcept { return static_cast<index_t>(hcols_.size()); }
  index_t hcol_height(index_t j) const {
    return static_cast<index_t>(hcols_[static_cast<std::size_t>(j)].size());
  }

  /// One block Arnoldi step. On rank deficiency the orthogonalization
  /// coefficients of the failed column are kept (they complete H up to the
  /// last square block) but no new basis block is added; returns false and
  /// marks the breakdown.
  bool step() {
    if (breakdown_) return false;
    const index_t j = steps_;
    std::vector<Eigen::MatrixXcd> w(static_cast<std::size_t>(indep_));
    for (index_t k = 0; k < indep_; ++k) {
      w[static_cast<std::size_t>(k)].noalias() =
          sa_[static_cast<std::size_t>(k)] * v_[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
    }
    std::vector<std::vector<Eigen::MatrixXcd>> col(static_cast<std::size_t>(j + 1));
    for (index_t i = 0; i <= j; ++i) {
      col[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(indep_),
                                              Eigen::MatrixXcd::Zero(s_, s_));
    }
    for (int pass = 0; pass < 2; ++pass) {
      for (index_t i = 0; i <= j; ++i) {
        for (index_t k = 0; k < indep_; ++k) {
          const auto& vi = v_[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
          auto& wk = w[static_cast<std::size_t>(k)];
          const Eigen::MatrixXcd coeff = vi.adjoint() * wk;
          col[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] += coeff;
          wk.noalias() -= vi * coeff;
        }
      }
    }
    hcols_.push_back(std::move(col));
    ++steps_;
    try {
      SpectralQr qr = spectral_gram_schmidt(w);
      hcols_.back().push_back(std::move(qr.r));  // H_{j+2,j+1} block
      v_.push_back(std::move(qr.q));
    } catch (const SingularTube&) {
      breakdown_ = true;
      breakdown_step_ = j + 2;  // index of the block that could not be built
      return false;
    }
    return true;
  }

  /// Projected Hessenberg tensor H_m, one (js x js) matrix per independent
  /// slice, assembled from the first j columns.
  std::vector<Eigen::MatrixXcd> projected_h(index_t j) const {
    std::vector<Eigen::MatrixXcd> h(static_cast<std::size_t>(indep_),
                                    Eigen::MatrixXcd::Zero(j * s_, j * s_));
    for (index_t col = 0; col < j; ++col) {
      const index_t imax = std::min<index_t>(hcol_height(col), j + 1);
      for (index_t i = 0; i < imax && i < j; ++i) {
        for (index_t k = 0; k < indep_; ++k) {
          h[static_cast<std::size_t>(k)].block(i * s_, col * s_, s_, s_) = hblock(i, col)[static_cast<std::size_t>(k)];
        }
      }
    }
    return h;
  }

 private:
  index_t n_, s_, n3_, indep_;
  std::vector<Eigen::MatrixXcd> sa_;
  std::vector<std::vector<Eigen::MatrixXcd>> v_;                // v_[i][k]
  std::vector<std::vector<std::vector<Eigen::MatrixXcd>>> hcols_;  // hcols_[j][i][k]
  std::vector<Eigen::MatrixXcd> h0_;
  int steps_ = 0;
  bool breakdown_ = false;
  index_t breakdown_step_ = 0;
};

template <typename T>
double parseval_weight(index_t k, index_t n3) {
  if constexpr (is_complex_v<T>) {
    return 1.0;
  } else {
    const bool self = (k == 0) || (n3 % 2 == 0 && k == n3 / 2);
    return self ? 1.0 : 2.0;
  }
}

}  // namespace detail

/// Orthonormal block basis of the tensor block Krylov subspace together with
/// the tube-valued block Hessenberg data.
template <typename T>
struct BlockArnoldiStateT {
  index_t n = 0, block_width = 0, n3 = 0;
  int steps = 0;
  bool breakdown = false;
  index_t breakdown_step = 0;

  std::vector<Tensor3<T>> vblocks;               // V_1..V_{steps+1} (steps only on breakdown)
  std::vector<std::vector<Tensor3<T>>> hblocks;  // hblocks[j][i] = H_{i+1,j+1}, i <= j+1
  Tensor3<T> h0;                                 // seed Tubal-QR coefficient

  /// [V_1, ..., V_m]: n x (m*s) x n3.
  Tensor3<T> assembled_basis(index_t m) const {
    std::vector<Tensor3<T>> front(vblocks.begin(), vblocks.begin() + m);
    return hconcat(front);
  }

  /// H_m as a dense (m*s) x (m*s) x n3 tensor.
  Tensor3<T> hm() const {
    const index_t m = steps, s = block_width;
    Tensor3<T> h(m * s, m * s, n3);
    for (index_t j = 0; j < m; ++j) {
      const index_t imax = std::min<index_t>(static_cast<index_t>(hblocks[j].size()), m);
      for (index_t i = 0; i < imax; ++i) {
        for (index_t k = 0; k < n3; ++k) {
          h.slice(k).block(i * s, j * s, s, s) = hblocks[j][i].slice(k);
        }
      }
    }
    return h;
  }

  /// H_{m+1} as a dense ((m+1)*s) x (m*s) x n3 tensor (requires no breakdown).
  Tensor3<T> hm1() const {
    const index_t m = steps, s = block_width;
    Tensor3<T> h((m + 1) * s, m * s, n3);
    for (index_t j = 0; j < m; ++j) {
      for (index_t i = 0; i < static_cast<index_t>(hblocks[j].size()); ++i) {
        for (index_t k = 0; k < n3; ++k) {
          h.slice(k).block(i * s, j * s, s, s) = hblocks[j][i].slice(k);
        }
      }
    }
    return h;
  }
};
using BlockArnoldiState = BlockArnoldiStateT<double>;

/// Tubal block Arnoldi process for (a, v): seed Tubal-QR, then per step
/// orthogonalize a * V_j against all previous blocks with tube-valued
/// coefficients and Tubal-QR the remainder. Rank deficiency raises
/// BlockBreakdown with the index of the block that could not be built.
template <typename T>
BlockArnoldiStateT<T> tubal_block_arnoldi(const Tensor3<T>& a, const Tensor3<T>& v, int m) {
  if (m < 1) throw DimensionMismatch("tubal_block_arnoldi: m must be >= 1");
  const SpectralTensor sa = fft_mode3(a), sv = fft_mode3(v);
  detail::TubalBlockArnoldiBuilder<T> b(sa, sv);
  for (int j = 0; j < m; ++j) {
    if (!b.step()) {
      throw BlockBreakdown("tubal_block_arnoldi: rank-deficient block at step " +
                               std::to_string(b.breakdown_step()),
                           b.breakdown_step());
    }
  }

  BlockArnoldiStateT<T> st;
  st.n = b.n();
  st.block_width = b.block_width();
  st.n3 = b.n3();
  st.steps = b.steps();
  st.breakdown = b.breakdown();
  st.breakdown_step = b.breakdown_step();
  const index_t s = st.block_width;
  for (index_t i = 0; i < b.vblock_count(); ++i) {
    st.vblocks.push_back(detail::from_spectral_slices<T>(st.n, s, st.n3, b.vblock(i)));
  }
  st.h0 = detail::from_spectral_slices<T>(s, s, st.n3, b.h0());
  for (index_t j = 0; j < b.hcol_count(); ++j) {
    std::vector<Tensor3<T>> col;
    for (index_t i = 0; i < b.hcol_height(j); ++i) {
      col.push_back(detail::from_spectral_slices<T>(s, s, st.n3, b.hblock(i, j)));
    }
    st.hblocks.push_back(std::move(col));
  }
  return st;
}

/// Precomputed spectral data for a TBAS solve: transforms of the
/// coefficients and the Schur factors of b's slices (b is fixed across
/// restarts, so its factorization is shared).
template <typename T>
struct TbasWorkspace {
  index_t n = 0, q = 0, n3 = 0, indep = 0;
  int sign = -1;
  SpectralTensor sa, sb;
  std::vector<detail::SliceSchur> schur_b;

  Tensor3<T> apply(const Tensor3<T>& x) const {
    const SpectralTensor sx = fft_mode3(x);
    SpectralTensor sy(x.n1(), x.n2(), x.n3(), !detail::is_complex_v<T>);
    const double sgn = static_cast<double>(sign);
    for (index_t k = 0; k < indep; ++k) {
      sy.slice(k).noalias() = sa.slice(k) * sx.slice(k);
      sy.slice(k).noalias() += sgn * (sx.slice(k) * sb.slice(k));
    }
    sy.mirror_fill();
    return detail::ifft_dispatch<T>(sy);
  }
};

template <typename T>
TbasWorkspace<T> make_tbas_workspace(const Tensor3<T>& a, const Tensor3<T>& b, int sign) {
  if (a.n1() != a.n2() || b.n1() != b.n2() || a.n3() != b.n3()) {
    throw DimensionMismatch("tbas: coefficient tensors must be square with equal depth");
  }
  if (sign != 1 && sign != -1) throw DimensionMismatch("tbas: sign must be +/-1");
  TbasWorkspace<T> ws;
  ws.n = a.n1();
  ws.q = b.n1();
  ws.n3 = a.n3();
  ws.indep = detail::independent_count<T>(a.n3());
  ws.sign = sign;
  ws.sa = fft_mode3(a);
  ws.sb = fft_mode3(b);
  for (index_t k = 0; k < ws.indep; ++k) {
    ws.schur_b.push_back(detail::complex_schur_slice(ws.sb.slice(k), k));
  }
  return ws;
}

template <typename T>
struct TbasCycleOutcomeT {
  Tensor3<T> update;
  double estimate = 0.0;
  int steps = 0;
  std::vector<double> estimates;
  bool breakdown_exact = false;
};

namespace detail {

/// One TBAS cycle on residual r0: build the block Krylov basis step by step,
/// solve the projected Sylvester equation after each step, and stop once the
/// cheap residual estimate ||H_{j+1,j} * (last block of Y)||_F reaches
/// early_tol. On block breakdown the candidate from the truncated basis is
/// verified against the explicit residual: an (almost) exact solve is
/// accepted, anything else rethrows BlockBreakdown.
template <typename T>
TbasCycleOutcomeT<T> tbas_cycle_ws(const TbasWorkspace<T>& ws, const Tensor3<T>& r0, int m,
                                   double early_tol) {
  if (m < 1) throw DimensionMismatch("tbas_cycle: m must be >= 1");
  if (r0.n1() != ws.n || r0.n2() != ws.q || r0.n3() != ws.n3) {
    throw DimensionMismatch("tbas_cycle: residual extents do not match workspace");
  }
  const index_t s = ws.q, n3 = ws.n3, indep = ws.indep;
  const SpectralTensor sr0 = fft_mode3(r0);
  TubalBlockArnoldiBuilder<T> b(ws.sa, sr0);

  // C1 = V^bT * R0, accumulated block by block as the basis grows.
  std::vector<std::vector<Eigen::MatrixXcd>> c1;
  auto append_c1_block = [&](index_t i) {
    std::vector<Eigen::MatrixXcd> blk(static_cast<std::size_t>(indep));
    for (index_t k = 0; k < indep; ++k) {
      blk[static_cast<std::size_t>(k)] = b.vblock(i)[static_cast<std::size_t>(k)].adjoint() * sr0.slice(k);
    }
    c1.push_back(std::move(blk));
  };
  append_c1_block(0);

  TbasCycleOutcomeT<T> out;
  std::vector<Eigen::MatrixXcd> y(static_cast<std::size_t>(indep));
  index_t j = 0;
  bool hit_breakdown = false;
  while (j < m) {
    const bool advanced = b.step();
    j = b.steps();
    if (advanced) append_c1_block(j);

    const auto h = b.projected_h(j);
    for (index_t k = 0; k < indep; ++k) {
      Eigen::MatrixXcd c1k(j * s, s);
      for (index_t i = 0; i < j; ++i) {
        c1k.middleRows(i * s, s) = c1[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
      }
      const auto fh = complex_schur_slice(h[static_cast<std::size_t>(k)], k);
      y[static_cast<std::size_t>(k)] =
          sylvester_slice_solve(fh, ws.schur_b[static_cast<std::size_t>(k)], c1k, ws.sign, k);
    }

    if (!advanced) {
      hit_breakdown = true;
      break;
    }
    double est2 = 0.0;
    for (index_t k = 0; k < indep; ++k) {
      const auto& hnext = b.hblock(j, j - 1)[static_cast<std::size_t>(k)];
      const double nk = (hnext * y[static_cast<std::size_t>(k)].bottomRows(s)).norm();
      est2 += parseval_weight<T>(k, n3) * nk * nk;
    }
    const double est = std::sqrt(est2 / static_cast<double>(n3));
    out.estimates.push_back(est);
    if (early_tol > 0.0 && est <= early_tol) break;
  }

  // Assemble the update V^b_j * Y in the spectral domain.
  std::vector<Eigen::MatrixXcd> upd(static_cast<std::size_t>(indep),
                                    Eigen::MatrixXcd::Zero(ws.n, s));
  for (index_t k = 0; k < indep; ++k) {
    for (index_t i = 0; i < j; ++i) {
      upd[static_cast<std::size_t>(k)].noalias() +=
          b.vblock(i)[static_cast<std::size_t>(k)] * y[static_cast<std::size_t>(k)].middleRows(i * s, s);
    }
  }
  out.update = from_spectral_slices<T>(ws.n, s, n3, upd, /*realify_self=*/true);
  out.steps = b.steps();

  if (hit_breakdown) {
    const double explicit_res = fro_norm(Tensor3<T>(r0 - ws.apply(out.update)));
    const double accept = std::max(early_tol, 1e-10 * fro_norm(r0));
    if (explicit_res > accept) {
      throw BlockBreakdown("tbas_cycle: rank-deficient block at step " +
                               std::to_string(b.breakdown_step()) +
                               " without exact subspace capture",
                           b.breakdown_step());
    }
    out.breakdown_exact = true;
    out.estimate = explicit_res;
    out.estimates.push_back(explicit_res);
    return out;
  }
  out.estimate = out.estimates.back();
  return out;
}

}  // namespace detail

/// One TBAS cycle on residual r0 for a * x + sign * x * b.
template <typename T>
TbasCycleOutcomeT<T> tbas_cycle(const Tensor3<T>& a, const Tensor3<T>& b, const Tensor3<T>& r0,
                                int m, int sign, double early_tol = 0.0) {
  return detail::tbas_cycle_ws(make_tbas_workspace(a, b, sign), r0, m, early_tol);
}

template <typename T>
struct TbasResultT {
  Tensor3<T> x;
  SolveReport report;
};
using TbasResult = TbasResultT<double>;

/// Restarted tubal block Arnoldi solver for a * x + sign * x * b = c. The
/// right-hand side width seeds the block Krylov space, the projected
/// equation is solved directly, and the explicit residual is recomputed at
/// every restart boundary. A failure to reduce the residual across two
/// consecutive restarts is flagged in the report warnings.
template <typename T>
TbasResultT<T> tbas_restarted(const Tensor3<T>& a, const Tensor3<T>& b, const Tensor3<T>& c,
                              std::optional<Tensor3<T>> x0, int m, double tol, int max_restarts,
                              int sign) {
  detail::check_sylvester_dims(a, b, c, sign, "tbas_restarted");
  if (m < 1 || max_restarts < 1) {
    throw DimensionMismatch("tbas_restarted: m and max_restarts must be >= 1");
  }
  const auto t0 = std::chrono::steady_clock::now();
  const auto elapsed_ms = [&t0] {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
  };
  const TbasWorkspace<T> ws = make_tbas_workspace(a, b, sign);

  SolveReport rep;
  rep.method = "tbas";
  rep.n = ws.n;
  rep.s = ws.q;
  rep.n3 = ws.n3;
  rep.m = m;
  rep.tol = tol;
  rep.block_width = ws.q;

  Tensor3<T> x = x0 ? std::move(*x0) : Tensor3<T>(ws.n, ws.q, ws.n3);
  Tensor3<T> r = c - ws.apply(x);
  double nr = fro_norm(r);
  rep.residual_history.push_back(nr);

  Tensor3<T> best_x = x;
  double best_nr = nr;
  if (nr < tol) {
    rep.converged = true;
    rep.wall_time_ms = elapsed_ms();
    return {std::move(x), std::move(rep)};
  }

  int stagnant_streak = 0;
  for (int cycle = 1; cycle <= max_restarts; ++cycle) {
    auto out = detail::tbas_cycle_ws(ws, r, m, tol);
    x += out.update;
    const double prev_nr = nr;
    r = c - ws.apply(x);
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
    if (nr >= prev_nr * (1.0 - 1e-10)) {
      if (++stagnant_streak >= 2) {
        rep.warnings.push_back("stagnation: residual not decreasing across restarts " +
                               std::to_string(cycle - 1) + " and " + std::to_string(cycle));
      }
    } else {
      stagnant_streak = 0;
    }
  }
  rep.wall_time_ms = elapsed_ms();
  throw MaxRestartsExceededT<T>("tbas_restarted: residual " + std::to_string(best_nr) +
                                    " above tol after " + std::to_string(max_restarts) +
                                    " restarts",
                                std::move(best_x), std::move(rep));
}

}  // namespace tsylv
