#include "tsylv/bas.hpp"

#include <chrono>

namespace tsylv {

namespace {

CTensor3 slice_as_depth1(const SpectralTensor& s, index_t k, index_t n1, index_t n2) {
  CTensor3 t(n1, n2, 1);
  t.slice(0) = s.slice(k);
  return t;
}

}  // namespace

BasOutcome bas_solve(const DenseTensor3& a, const DenseTensor3& b, const DenseTensor3& c, int m,
                     double tol, int max_restarts, int sign) {
  detail::check_sylvester_dims(a, b, c, sign, "bas_solve");
  const auto t0 = std::chrono::steady_clock::now();
  const index_t n = a.n1(), q = b.n1(), n3 = a.n3();
  const index_t indep = detail::independent_count<double>(n3);

  const SpectralTensor sa = fft_mode3(a), sb = fft_mode3(b), sc = fft_mode3(c);

  BasOutcome out;
  SpectralTensor sx(n, q, n3, /*symmetric=*/true);
  bool all_converged = true;
  std::size_t slowest = 0;

  for (index_t k = 0; k < indep; ++k) {
    const CTensor3 ak = slice_as_depth1(sa, k, n, n);
    const CTensor3 bk = slice_as_depth1(sb, k, q, q);
    const CTensor3 ck = slice_as_depth1(sc, k, n, q);
    CTensor3 xk;
    SolveReport rk;
    try {
      auto res = tbas_restarted<cxd>(ak, bk, ck, std::nullopt, m, tol, max_restarts, sign);
      xk = std::move(res.x);
      rk = std::move(res.report);
    } catch (const MaxRestartsExceededT<cxd>& e) {
      xk = e.best_iterate();
      rk = e.report();
      all_converged = false;
    }
    rk.method = "bas[slice " + std::to_string(k) + "]";
    sx.slice(k) = xk.slice(0);
    if (out.slice_reports.empty() || rk.iterations > out.slice_reports[slowest].iterations) {
      slowest = out.slice_reports.size();
    }
    out.slice_reports.push_back(std::move(rk));
  }

  detail::realify_self_conjugate_slices(sx);
  sx.mirror_fill();
  out.x = ifft_mode3(sx);

  SolveReport rep;
  rep.method = "bas";
  rep.n = n;
  rep.s = q;
  rep.n3 = n3;
  rep.m = m;
  rep.tol = tol;
  rep.block_width = q;
  rep.converged = all_converged;
  for (const auto& rk : out.slice_reports) {
    rep.iterations = std::max(rep.iterations, rk.iterations);
    rep.restarts = std::max(rep.restarts, rk.restarts);
    for (const auto& w : rk.warnings) rep.warnings.push_back(w);
  }
  rep.residual_history = out.slice_reports[slowest].residual_history;
  const double explicit_res = fro_norm(sylvester_residual(a, b, c, out.x, sign));
  rep.residual_history.push_back(explicit_res);
  rep.converged = all_converged && explicit_res < tol;
  rep.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  out.report = rep;

  if (!out.report.converged) {
    throw MaxRestartsExceeded("bas_solve: assembled residual " + std::to_string(explicit_res) +
                                  " above tol",
                              std::move(out.x), std::move(out.report));
  }
  return out;
}

}  // namespace tsylv
