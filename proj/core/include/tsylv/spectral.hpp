#pragma once

#include <cmath>
#include <numbers>

#include "tsylv/tensor.hpp"

namespace tsylv {

/// n-th roots of unity w[e] = exp(-2*pi*i*e/n) with the conjugate pairs
/// w[e] == conj(w[n-e]) holding exactly in floating point.
inline std::vector<cxd> dft_roots(index_t n) {
  std::vector<cxd> w(static_cast<std::size_t>(n));
  w[0] = cxd(1.0, 0.0);
  for (index_t e = 1; e <= n / 2; ++e) {
    const double ang = -2.0 * std::numbers::pi * static_cast<double>(e) / static_cast<double>(n);
    w[e] = cxd(std::cos(ang), std::sin(ang));
  }
  if (n % 2 == 0 && n >= 2) w[n / 2] = cxd(-1.0, 0.0);
  for (index_t e = n / 2 + 1; e < n; ++e) w[e] = std::conj(w[n - e]);
  return w;
}

/// Unnormalized DFT matrix F[r,c] = w[(r*c) mod n]. F is symmetric, so the
/// mode-3 transform of a tensor is mode3_view * F.
inline Eigen::MatrixXcd dft_matrix(index_t n) {
  const auto w = dft_roots(n);
  Eigen::MatrixXcd f(n, n);
  for (index_t r = 0; r < n; ++r)
    for (index_t c = 0; c < n; ++c) f(r, c) = w[static_cast<std::size_t>((r * c) % n)];
  return f;
}

/// Complex frontal slices of a tensor after the mode-3 DFT. `symmetric()`
/// records that the origin tensor was real, in which case slice k and slice
/// n3-k (1 <= k) are conjugates and only the first n3/2 + 1 slices carry
/// independent data.
class SpectralTensor {
 public:
  SpectralTensor() = default;
  SpectralTensor(index_t n1, index_t n2, index_t n3, bool symmetric)
      : slices_(n1, n2, n3), symmetric_(symmetric) {}

  index_t n1() const noexcept { return slices_.n1(); }
  index_t n2() const noexcept { return slices_.n2(); }
  index_t n3() const noexcept { return slices_.n3(); }
  bool symmetric() const noexcept { return symmetric_; }
  void set_symmetric(bool s) noexcept { symmetric_ = s; }

  /// Number of slices that must be computed explicitly; the rest follow by
  /// conjugate symmetry when symmetric() is true.
  index_t independent_slices() const noexcept {
    return symmetric_ ? n3() / 2 + 1 : n3();
  }

  CTensor3::MapType slice(index_t k) { return slices_.slice(k); }
  CTensor3::ConstMapType slice(index_t k) const { return slices_.slice(k); }

  CTensor3& storage() noexcept { return slices_; }
  const CTensor3& storage() const noexcept { return slices_; }

  /// Fill slices independent_slices()..n3-1 with the conjugates of their
  /// mirror slices. No-op unless symmetric.
  void mirror_fill() {
    if (!symmetric_) return;
    for (index_t k = independent_slices(); k < n3(); ++k) {
      slice(k) = slice(n3() - k).conjugate();
    }
  }

  /// Largest absolute deviation from conjugate symmetry, relative to the
  /// Frobenius norm of the slices. Zero for non-symmetric tensors.
  double symmetry_defect() const {
    if (!symmetric_) return 0.0;
    const double scale = std::max(slices_.vec().norm(), 1e-300);
    double worst = 0.0;
    for (index_t k = independent_slices(); k < n3(); ++k) {
      const double d = (slice(k) - slice(n3() - k).conjugate()).cwiseAbs().maxCoeff();
      worst = std::max(worst, d / scale);
    }
    return worst;
  }

 private:
  CTensor3 slices_;
  bool symmetric_ = false;
};

/// Mode-3 DFT of a real tensor. The result carries the symmetric flag and
/// its conjugate pairs match exactly (the root table is exactly symmetric).
inline SpectralTensor fft_mode3(const DenseTensor3& t) {
  SpectralTensor s(t.n1(), t.n2(), t.n3(), /*symmetric=*/true);
  const Eigen::MatrixXcd f = dft_matrix(t.n3());
  s.storage().mode3_view() = t.mode3_view().cast<cxd>() * f;
  return s;
}

/// Mode-3 DFT of a complex tensor (no symmetry).
inline SpectralTensor fft_mode3(const CTensor3& t) {
  SpectralTensor s(t.n1(), t.n2(), t.n3(), /*symmetric=*/false);
  const Eigen::MatrixXcd f = dft_matrix(t.n3());
  s.storage().mode3_view() = t.mode3_view() * f;
  return s;
}

/// Inverse mode-3 DFT to a complex tensor.
inline CTensor3 ifft_mode3_complex(const SpectralTensor& s) {
  CTensor3 t(s.n1(), s.n2(), s.n3());
  const Eigen::MatrixXcd finv = dft_matrix(s.n3()).conjugate() / static_cast<double>(s.n3());
  t.mode3_view() = s.storage().mode3_view() * finv;
  return t;
}

/// Inverse mode-3 DFT of a symmetric spectral tensor back to a real tensor.
/// The imaginary residue is checked against 1e-12 * ||.||_F and dropped;
/// a larger residue means the slices were corrupted upstream.
inline DenseTensor3 ifft_mode3(const SpectralTensor& s) {
  if (!s.symmetric()) {
    throw SymmetryViolation("ifft_mode3: spectral tensor is not flagged symmetric");
  }
  const CTensor3 z = ifft_mode3_complex(s);
  const double imag_norm = z.vec().imag().norm();
  const double norm = std::max(z.vec().norm(), 1e-300);
  if (imag_norm > 1e-12 * norm) {
    throw SymmetryViolation("ifft_mode3: imaginary residue " + std::to_string(imag_norm / norm) +
                            " exceeds 1e-12 of the norm");
  }
  DenseTensor3 t(s.n1(), s.n2(), s.n3());
  t.vec() = z.vec().real();
  return t;
}

namespace detail {

// fft/ifft dispatch helpers so templated code reads uniformly.
template <typename T>
Tensor3<T> ifft_dispatch(const SpectralTensor& s) {
  if constexpr (is_complex_v<T>) {
    return ifft_mode3_complex(s);
  } else {
    return ifft_mode3(s);
  }
}

}  // namespace detail

}  // namespace tsylv
