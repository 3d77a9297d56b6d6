#pragma once

#include <algorithm>

#include "tsylv/tproduct.hpp"

namespace tsylv {

/// Tubal scalar: a 1 x 1 x n3 tensor, the scalar ring of the T-product
/// algebra under circular convolution.
class Tube {
 public:
  Tube() = default;
  explicit Tube(index_t n3) : v_(static_cast<std::size_t>(n3), 0.0) {
    if (n3 < 1) throw DimensionMismatch("Tube: n3 must be positive");
  }
  explicit Tube(std::vector<double> values) : v_(std::move(values)) {
    if (v_.empty()) throw DimensionMismatch("Tube: empty value list");
  }

  index_t n3() const noexcept { return static_cast<index_t>(v_.size()); }
  double& operator[](index_t k) { return v_[static_cast<std::size_t>(k)]; }
  double operator[](index_t k) const { return v_[static_cast<std::size_t>(k)]; }
  const std::vector<double>& values() const noexcept { return v_; }

  DenseTensor3 to_tensor() const {
    DenseTensor3 t(1, 1, n3());
    for (index_t k = 0; k < n3(); ++k) t(0, 0, k) = v_[static_cast<std::size_t>(k)];
    return t;
  }
  static Tube from_tensor(const DenseTensor3& t) {
    if (t.n1() != 1 || t.n2() != 1) throw DimensionMismatch("Tube: tensor is not 1 x 1 x n3");
    Tube z(t.n3());
    for (index_t k = 0; k < t.n3(); ++k) z[k] = t(0, 0, k);
    return z;
  }

  /// The multiplicative identity e: unfold(e) = (1, 0, ..., 0)^T.
  static Tube identity(index_t n3) {
    Tube e(n3);
    e[0] = 1.0;
    return e;
  }

 private:
  std::vector<double> v_;
};

/// Singularity threshold for Fourier coefficients, relative so that scaling
/// a tube does not change its rank.
inline double tube_tolerance(double max_coeff_magnitude) {
  return 1e-13 * std::max(1.0, max_coeff_magnitude);
}

namespace detail {

inline Eigen::VectorXcd tube_dft(const Tube& z) {
  Eigen::VectorXd x(z.n3());
  for (index_t k = 0; k < z.n3(); ++k) x(k) = z[k];
  return dft_matrix(z.n3()) * x.cast<cxd>();
}

}  // namespace detail

/// Number of Fourier coefficients with magnitude above the tube tolerance.
inline index_t tubal_rank(const Tube& z) {
  const Eigen::VectorXcd zh = detail::tube_dft(z);
  const double tol = tube_tolerance(zh.cwiseAbs().maxCoeff());
  index_t rank = 0;
  for (index_t k = 0; k < zh.size(); ++k) {
    if (std::abs(zh(k)) > tol) ++rank;
  }
  return rank;
}

/// Inverse tube, defined when every Fourier coefficient is nonzero; computed
/// by taking reciprocals in the spectral domain.
inline Tube tube_inverse(const Tube& z) {
  const Eigen::VectorXcd zh = detail::tube_dft(z);
  const double tol = tube_tolerance(zh.cwiseAbs().maxCoeff());
  for (index_t k = 0; k < zh.size(); ++k) {
    if (std::abs(zh(k)) <= tol) {
      throw SingularTube("tube_inverse: Fourier coefficient " + std::to_string(k) +
                         " below tolerance; tubal rank < n3");
    }
  }
  SpectralTensor s(1, 1, z.n3(), /*symmetric=*/true);
  for (index_t k = 0; k < z.n3(); ++k) s.slice(k)(0, 0) = 1.0 / zh(k);
  return Tube::from_tensor(ifft_mode3(s));
}

/// Circular convolution of tubes (their T-product).
inline Tube tube_product(const Tube& a, const Tube& b) {
  return Tube::from_tensor(t_product(a.to_tensor(), b.to_tensor()));
}

inline double tube_fro_norm(const Tube& z) {
  double s = 0.0;
  for (double x : z.values()) s += x * x;
  return std::sqrt(s);
}

}  // namespace tsylv
