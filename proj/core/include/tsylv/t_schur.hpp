#pragma once

#include <Eigen/Eigenvalues>

#include "tsylv/tubal_qr.hpp"

namespace tsylv {

namespace detail {

struct SliceSchur {
  Eigen::MatrixXcd q;  // unitary
  Eigen::MatrixXcd t;  // upper triangular
};

inline SliceSchur complex_schur_slice(const Eigen::MatrixXcd& a, index_t slice_index) {
  Eigen::ComplexSchur<Eigen::MatrixXcd> cs(a, /*computeU=*/true);
  if (cs.info() != Eigen::Success) {
    throw ConvergenceFailure(
        "t_schur: eigenvalue iteration failed on spectral slice " + std::to_string(slice_index),
        slice_index);
  }
  return {cs.matrixU(), cs.matrixT()};
}

/// Complex Schur of every independent spectral slice.
template <typename T>
std::vector<SliceSchur> schur_slices(const SpectralTensor& sa) {
  const index_t indep = independent_count<T>(sa.n3());
  std::vector<SliceSchur> out;
  out.reserve(static_cast<std::size_t>(indep));
  for (index_t k = 0; k < indep; ++k) out.push_back(complex_schur_slice(sa.slice(k), k));
  return out;
}

}  // namespace detail

/// Factors of a = u * r * u^T with u orthogonal and every spectral slice of
/// r strictly upper triangular. The factors are complex-valued tensors: a
/// real spectral slice with complex eigenvalues has genuinely complex
/// unitary Schur factors, so realness of the input survives only in the
/// reassembled product, not in u and r themselves.
struct SchurFactors {
  CTensor3 u;
  CTensor3 r;
};

/// t-Schur decomposition: complex Schur per independent spectral slice,
/// conjugate-mirrored across the remaining slices, then inverse-transformed.
template <typename T>
SchurFactors t_schur(const Tensor3<T>& a) {
  if (a.n1() != a.n2()) throw DimensionMismatch("t_schur: tensor not square in modes 1-2");
  const index_t n = a.n1(), n3 = a.n3();
  const index_t indep = detail::independent_count<T>(n3);
  const SpectralTensor sa = fft_mode3(a);

  SpectralTensor su(n, n, n3, false), sr(n, n, n3, false);
  for (index_t k = 0; k < indep; ++k) {
    auto fk = detail::complex_schur_slice(sa.slice(k), k);
    su.slice(k) = fk.q;
    sr.slice(k) = fk.t;
  }
  detail::mirror_conjugate_pairs(su, indep);
  detail::mirror_conjugate_pairs(sr, indep);
  return {ifft_mode3_complex(su), ifft_mode3_complex(sr)};
}

}  // namespace tsylv
