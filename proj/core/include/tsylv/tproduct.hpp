#pragma once

#include <vector>

#include "tsylv/spectral.hpp"
#include "tsylv/tensor.hpp"

namespace tsylv {

/// Block-circulant expansion: block (p,q) is frontal slice (p - q) mod n3,
/// giving an (n1*n3) x (n2*n3) matrix.
template <typename T>
typename Tensor3<T>::Matrix bcirc(const Tensor3<T>& t) {
  const index_t n1 = t.n1(), n2 = t.n2(), n3 = t.n3();
  typename Tensor3<T>::Matrix m(n1 * n3, n2 * n3);
  for (index_t p = 0; p < n3; ++p) {
    for (index_t q = 0; q < n3; ++q) {
      m.block(p * n1, q * n2, n1, n2) = t.slice((p - q + n3) % n3);
    }
  }
  return m;
}

/// Frontal slices stacked vertically in k order: an (n1*n3) x n2 matrix.
template <typename T>
typename Tensor3<T>::Matrix unfold(const Tensor3<T>& t) {
  const index_t n1 = t.n1(), n2 = t.n2(), n3 = t.n3();
  typename Tensor3<T>::Matrix m(n1 * n3, n2);
  for (index_t k = 0; k < n3; ++k) m.block(k * n1, 0, n1, n2) = t.slice(k);
  return m;
}

/// Inverse of unfold: reinterpret an (n1*n3) x n2 matrix as a tensor with n3
/// frontal slices.
template <typename Derived>
Tensor3<typename Derived::Scalar> fold(const Eigen::MatrixBase<Derived>& m, index_t n3) {
  if (n3 < 1 || m.rows() % n3 != 0) {
    throw DimensionMismatch("fold: row count " + std::to_string(m.rows()) +
                            " not divisible by n3 = " + std::to_string(n3));
  }
  const index_t n1 = m.rows() / n3;
  Tensor3<typename Derived::Scalar> t(n1, m.cols(), n3);
  for (index_t k = 0; k < n3; ++k) t.slice(k) = m.block(k * n1, 0, n1, m.cols());
  return t;
}

/// T-product by the definition fold(bcirc(a) * unfold(b)). Quadratic in n3;
/// kept as the independent reference the fast path is tested against.
template <typename T>
Tensor3<T> t_product_reference(const Tensor3<T>& a, const Tensor3<T>& b) {
  if (a.n2() != b.n1() || a.n3() != b.n3()) {
    throw DimensionMismatch("t_product_reference: extents do not conform");
  }
  return fold((bcirc(a) * unfold(b)).eval(), a.n3());
}

namespace detail {

/// Slice products in the spectral domain. For symmetric (real-origin) data
/// only the first n3/2 + 1 products are formed; the mirrored slices follow
/// by conjugate symmetry. Note that for even n3 this is one product more
/// than floor((n3+1)/2): the Nyquist slice is self-conjugate and cannot be
/// filled from any other slice.
inline SpectralTensor spectral_product(const SpectralTensor& sa, const SpectralTensor& sb) {
  const bool sym = sa.symmetric() && sb.symmetric();
  SpectralTensor sc(sa.n1(), sb.n2(), sa.n3(), sym);
  for (index_t k = 0; k < sc.independent_slices(); ++k) {
    sc.slice(k).noalias() = sa.slice(k) * sb.slice(k);
  }
  sc.mirror_fill();
  return sc;
}

}  // namespace detail

/// T-product via the mode-3 DFT: transform, multiply matching spectral
/// slices, transform back.
template <typename T>
Tensor3<T> t_product(const Tensor3<T>& a, const Tensor3<T>& b) {
  if (a.n2() != b.n1() || a.n3() != b.n3()) {
    throw DimensionMismatch("t_product: extents do not conform (" + std::to_string(a.n2()) +
                            " vs " + std::to_string(b.n1()) + ", n3 " + std::to_string(a.n3()) +
                            " vs " + std::to_string(b.n3()) + ")");
  }
  return detail::ifft_dispatch<T>(detail::spectral_product(fft_mode3(a), fft_mode3(b)));
}

/// T-transpose: transpose each frontal slice (conjugating complex entries)
/// and reverse the order of slices 2..n3. In the spectral domain this is the
/// slice-wise conjugate transpose.
template <typename T>
Tensor3<T> t_transpose(const Tensor3<T>& t) {
  Tensor3<T> out(t.n2(), t.n1(), t.n3());
  out.slice(0) = t.slice(0).transpose().conjugate();
  for (index_t k = 1; k < t.n3(); ++k) {
    out.slice(k) = t.slice(t.n3() - k).transpose().conjugate();
  }
  return out;
}

/// T-diamond product of two block collections of equally sized tensors: the
/// p x l matrix of pairwise scalar inner products.
template <typename T>
typename Tensor3<T>::Matrix t_diamond(const std::vector<Tensor3<T>>& a,
                                      const std::vector<Tensor3<T>>& b) {
  if (a.empty() || b.empty()) throw DimensionMismatch("t_diamond: empty block collection");
  for (const auto& t : a) {
    if (!t.same_dims(a.front())) throw DimensionMismatch("t_diamond: ragged left blocks");
  }
  for (const auto& t : b) {
    if (!t.same_dims(a.front())) throw DimensionMismatch("t_diamond: block extents differ");
  }
  typename Tensor3<T>::Matrix m(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) m(i, j) = inner(a[i], b[j]);
  return m;
}

/// The combination product: sum_j y_j V_j over an ordered basis. An isometry
/// from coefficient space when the basis is orthonormal.
template <typename T>
Tensor3<T> basis_combine(const std::vector<Tensor3<T>>& basis, const Eigen::VectorXd& y) {
  if (basis.empty() || static_cast<index_t>(basis.size()) != y.size()) {
    throw DimensionMismatch("basis_combine: coefficient length " + std::to_string(y.size()) +
                            " does not match basis size " + std::to_string(basis.size()));
  }
  Tensor3<T> out(basis.front().n1(), basis.front().n2(), basis.front().n3());
  for (std::size_t j = 0; j < basis.size(); ++j) {
    if (!basis[j].same_dims(out)) throw DimensionMismatch("basis_combine: ragged basis");
    out.vec() += y(static_cast<Eigen::Index>(j)) * basis[j].vec();
  }
  return out;
}

}  // namespace tsylv
