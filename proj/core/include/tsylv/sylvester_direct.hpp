#pragma once

#include "tsylv/t_schur.hpp"

namespace tsylv {

namespace detail {

/// Solve R_A Y + sign Y R_B = C for one spectral slice, with both
/// coefficients upper triangular, by column-wise back substitution. The
/// shifted diagonal coefficients R_A(d,d) + sign R_B(j,j) are the spectra
/// differences; a vanishing one means the slice pencil is singular.
inline Eigen::MatrixXcd triangular_sylvester_slice(const Eigen::MatrixXcd& ra,
                                                   const Eigen::MatrixXcd& rb,
                                                   const Eigen::MatrixXcd& c, int sign,
                                                   index_t slice_index) {
  const index_t n = ra.rows(), q = rb.rows();
  const double sgn = static_cast<double>(sign);
  Eigen::MatrixXcd y(n, q);
  Eigen::MatrixXcd shifted = ra;
  for (index_t j = 0; j < q; ++j) {
    const cxd shift = sgn * rb(j, j);
    for (index_t d = 0; d < n; ++d) {
      const cxd coeff = ra(d, d) + shift;
      const double scale = std::max(std::abs(ra(d, d)), std::abs(shift));
      if (std::abs(coeff) <= 1e-13 * scale || coeff == cxd(0.0, 0.0)) {
        throw SingularPencil("triangular Sylvester solve: spectra intersect on slice " +
                             std::to_string(slice_index) + " (diagonal " + std::to_string(d) +
                             ", column " + std::to_string(j) + ")");
      }
    }
    shifted.diagonal() = ra.diagonal().array() + shift;
    Eigen::VectorXcd rhs = c.col(j);
    if (j > 0) rhs.noalias() -= sgn * (y.leftCols(j) * rb.col(j).head(j));
    y.col(j) = shifted.triangularView<Eigen::Upper>().solve(rhs);
  }
  return y;
}

/// Solve A X + sign X B = C for one spectral slice given Schur forms of the
/// coefficients: transform, back-substitute, transform back.
inline Eigen::MatrixXcd sylvester_slice_solve(const SliceSchur& a, const SliceSchur& b,
                                              const Eigen::MatrixXcd& c, int sign,
                                              index_t slice_index) {
  const Eigen::MatrixXcd c1 = a.q.adjoint() * c * b.q;
  const Eigen::MatrixXcd y = triangular_sylvester_slice(a.t, b.t, c1, sign, slice_index);
  return a.q * y * b.q.adjoint();
}

/// Zero the imaginary part of the self-conjugate slices (k = 0 and, for even
/// n3, k = n3/2). Used when the slices hold the solution of a real equation
/// computed through complex factors: the true solution is real and the
/// imaginary part is solver noise.
inline void realify_self_conjugate_slices(SpectralTensor& s) {
  s.slice(0) = s.slice(0).real().cast<cxd>();
  if (s.n3() % 2 == 0 && s.n3() >= 2) {
    s.slice(s.n3() / 2) = s.slice(s.n3() / 2).real().cast<cxd>();
  }
}

template <typename T>
void check_sylvester_dims(const Tensor3<T>& a, const Tensor3<T>& b, const Tensor3<T>& c,
                          int sign, const char* who) {
  if (sign != 1 && sign != -1) throw DimensionMismatch(std::string(who) + ": sign must be +/-1");
  if (a.n1() != a.n2() || b.n1() != b.n2()) {
    throw DimensionMismatch(std::string(who) + ": coefficient tensors must be square");
  }
  if (c.n1() != a.n1() || c.n2() != b.n1() || a.n3() != b.n3() || a.n3() != c.n3()) {
    throw DimensionMismatch(std::string(who) + ": right-hand side extents do not conform");
  }
}

}  // namespace detail

/// Solve r_a * y + sign * y * r_b = c where both coefficients have upper
/// triangular spectral slices. Realized per spectral slice as column-wise
/// triangular back substitution, then inverse-transformed.
template <typename T>
Tensor3<T> t_back_substitution(const Tensor3<T>& r_a, const Tensor3<T>& r_b, const Tensor3<T>& c,
                               int sign) {
  detail::check_sylvester_dims(r_a, r_b, c, sign, "t_back_substitution");
  const index_t n3 = c.n3();
  const index_t indep = detail::independent_count<T>(n3);
  const SpectralTensor sa = fft_mode3(r_a), sb = fft_mode3(r_b), sc = fft_mode3(c);
  SpectralTensor sy(c.n1(), c.n2(), n3, !detail::is_complex_v<T>);
  for (index_t k = 0; k < indep; ++k) {
    sy.slice(k) = detail::triangular_sylvester_slice(sa.slice(k), sb.slice(k), sc.slice(k), sign, k);
  }
  sy.mirror_fill();
  return detail::ifft_dispatch<T>(sy);
}

/// Direct Sylvester solver a * x + sign * x * b = c: Schur-transform both
/// coefficients per spectral slice, back-substitute the triangular equation,
/// and transform back. Intended for small or projected equations.
template <typename T>
Tensor3<T> t_bartels_stewart(const Tensor3<T>& a, const Tensor3<T>& b, const Tensor3<T>& c,
                             int sign) {
  detail::check_sylvester_dims(a, b, c, sign, "t_bartels_stewart");
  const index_t n3 = c.n3();
  const index_t indep = detail::independent_count<T>(n3);
  const SpectralTensor sa = fft_mode3(a), sb = fft_mode3(b), sc = fft_mode3(c);
  SpectralTensor sx(c.n1(), c.n2(), n3, !detail::is_complex_v<T>);
  for (index_t k = 0; k < indep; ++k) {
    const auto fa = detail::complex_schur_slice(sa.slice(k), k);
    const auto fb = detail::complex_schur_slice(sb.slice(k), k);
    sx.slice(k) = detail::sylvester_slice_solve(fa, fb, sc.slice(k), sign, k);
  }
  if constexpr (!detail::is_complex_v<T>) {
    detail::realify_self_conjugate_slices(sx);
  }
  sx.mirror_fill();
  return detail::ifft_dispatch<T>(sx);
}

/// Residual c - (a * x + sign * x * b) of a Sylvester solution candidate.
template <typename T>
Tensor3<T> sylvester_residual(const Tensor3<T>& a, const Tensor3<T>& b, const Tensor3<T>& c,
                              const Tensor3<T>& x, int sign) {
  Tensor3<T> r = c;
  r -= t_product(a, x);
  Tensor3<T> xb = t_product(x, b);
  if (sign < 0) {
    r += xb;
  } else {
    r -= xb;
  }
  return r;
}

}  // namespace tsylv
