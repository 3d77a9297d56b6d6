#pragma once

#include <utility>
#include <vector>

#include "tsylv/tube.hpp"

namespace tsylv {

namespace detail {

template <typename T>
index_t independent_count(index_t n3) {
  if constexpr (is_complex_v<T>) {
    return n3;
  } else {
    return n3 / 2 + 1;
  }
}

inline void mirror_conjugate_pairs(SpectralTensor& s, index_t indep) {
  for (index_t k = indep; k < s.n3(); ++k) s.slice(k) = s.slice(s.n3() - k).conjugate();
}

struct SpectralQr {
  std::vector<Eigen::MatrixXcd> q;
  std::vector<Eigen::MatrixXcd> r;
};

/// Gram-Schmidt over the columns of one matrix per spectral slice, all
/// slices advanced in lockstep so the per-column breakdown test can look at
/// every slice of the coefficient tube at once. Classical Gram-Schmidt with
/// one reorthogonalization pass; coefficients accumulate into r.
/// Throws SingularTube (with the column index) when some slice norm of a
/// projected column falls below the tube tolerance.
inline SpectralQr spectral_gram_schmidt(const std::vector<Eigen::MatrixXcd>& a) {
  const index_t nslices = static_cast<index_t>(a.size());
  const index_t n1 = a.front().rows(), m = a.front().cols();
  SpectralQr f;
  f.q.assign(a.size(), Eigen::MatrixXcd::Zero(n1, m));
  f.r.assign(a.size(), Eigen::MatrixXcd::Zero(m, m));
  for (index_t j = 0; j < m; ++j) {
    std::vector<Eigen::VectorXcd> w(a.size());
    for (index_t k = 0; k < nslices; ++k) w[k] = a[k].col(j);
    for (int pass = 0; pass < 2; ++pass) {
      for (index_t i = 0; i < j; ++i) {
        for (index_t k = 0; k < nslices; ++k) {
          const cxd coeff = f.q[k].col(i).dot(w[k]);
          f.r[k](i, j) += coeff;
          w[k] -= coeff * f.q[k].col(i);
        }
      }
    }
    double max_norm = 0.0;
    for (index_t k = 0; k < nslices; ++k) max_norm = std::max(max_norm, w[k].norm());
    const double tol = tube_tolerance(max_norm);
    for (index_t k = 0; k < nslices; ++k) {
      const double nrm = w[k].norm();
      if (nrm <= tol) {
        throw SingularTube("spectral Gram-Schmidt: column " + std::to_string(j) +
                           " rank deficient at slice " + std::to_string(k),
                           j);
      }
      f.r[k](j, j) = nrm;
      f.q[k].col(j) = w[k] / nrm;
    }
  }
  return f;
}

template <typename T>
Tensor3<T> from_spectral_slices(index_t n1, index_t n2, index_t n3,
                                const std::vector<Eigen::MatrixXcd>& slices,
                                bool realify_self = false) {
  SpectralTensor s(n1, n2, n3, !is_complex_v<T>);
  const index_t indep = independent_count<T>(n3);
  for (index_t k = 0; k < indep; ++k) s.slice(k) = slices[static_cast<std::size_t>(k)];
  if (realify_self && !is_complex_v<T>) {
    s.slice(0) = s.slice(0).real().template cast<cxd>();
    if (n3 % 2 == 0 && n3 >= 2) {
      s.slice(n3 / 2) = s.slice(n3 / 2).real().template cast<cxd>();
    }
  }
  s.mirror_fill();
  return ifft_dispatch<T>(s);
}

}  // namespace detail

/// Factor a tensor column v (n1 x 1 x n3) as v = u * a with u^T * u = e:
/// per spectral slice, a is the Euclidean norm of the slice and u the slice
/// scaled to unit norm. Fails with SingularTube when some slice norm falls
/// below the tube tolerance, which is the breakdown signal for QR/Arnoldi
/// callers.
template <typename T>
std::pair<Tensor3<T>, Tensor3<T>> normalization1(const Tensor3<T>& v) {
  if (v.n2() != 1) throw DimensionMismatch("normalization1: input is not a tensor column");
  const index_t n3 = v.n3();
  const index_t indep = detail::independent_count<T>(n3);
  const SpectralTensor sv = fft_mode3(v);

  Eigen::VectorXd norms(indep);
  for (index_t k = 0; k < indep; ++k) norms(k) = sv.slice(k).norm();
  const double tol = tube_tolerance(norms.maxCoeff());
  for (index_t k = 0; k < indep; ++k) {
    if (norms(k) <= tol) {
      throw SingularTube("normalization1: spectral slice " + std::to_string(k) +
                         " has norm below tolerance; coefficient tube not invertible");
    }
  }

  const bool sym = !detail::is_complex_v<T>;
  SpectralTensor su(v.n1(), 1, n3, sym), sa(1, 1, n3, sym);
  for (index_t k = 0; k < indep; ++k) {
    su.slice(k) = sv.slice(k) / norms(k);
    sa.slice(k)(0, 0) = norms(k);
  }
  su.mirror_fill();
  sa.mirror_fill();
  return {detail::ifft_dispatch<T>(su), detail::ifft_dispatch<T>(sa)};
}

/// Real-tensor convenience returning the coefficient as a Tube.
inline std::pair<DenseTensor3, Tube> normalization1_tube(const DenseTensor3& v) {
  auto [u, a] = normalization1(v);
  return {std::move(u), Tube::from_tensor(a)};
}

template <typename T>
struct TubalQrFactorsT {
  Tensor3<T> q;  // n1 x m x n3, orthonormal tensor columns
  Tensor3<T> r;  // m x m x n3, upper triangular spectral slices
};
using TubalQrFactors = TubalQrFactorsT<double>;

/// Tubal QR factorization a = q * r by Gram-Schmidt over tensor columns with
/// tube coefficients r(i,j,:) = v_i^T * w, realized slice-wise in the
/// spectral domain. A rank-deficient column raises SingularTube carrying the
/// column index.
template <typename T>
TubalQrFactorsT<T> tubal_qr(const Tensor3<T>& a) {
  const index_t n1 = a.n1(), m = a.n2(), n3 = a.n3();
  if (m > n1) {
    throw DimensionMismatch("tubal_qr: more columns than rows (" + std::to_string(m) + " > " +
                            std::to_string(n1) + ")");
  }
  const index_t indep = detail::independent_count<T>(n3);
  const SpectralTensor sa = fft_mode3(a);
  std::vector<Eigen::MatrixXcd> slices(static_cast<std::size_t>(indep));
  for (index_t k = 0; k < indep; ++k) slices[static_cast<std::size_t>(k)] = sa.slice(k);

  const auto f = detail::spectral_gram_schmidt(slices);
  return {detail::from_spectral_slices<T>(n1, m, n3, f.q),
          detail::from_spectral_slices<T>(m, m, n3, f.r)};
}

}  // namespace tsylv
