#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Core>

#include "tsylv/errors.hpp"

namespace tsylv {

using index_t = std::int64_t;
using cxd = std::complex<double>;

namespace detail {

template <typename T>
inline constexpr bool is_complex_v = false;
template <typename U>
inline constexpr bool is_complex_v<std::complex<U>> = true;

inline double conj_if_complex(double x) { return x; }
inline cxd conj_if_complex(const cxd& x) { return std::conj(x); }

}  // namespace detail

/// Order-3 tensor of extents n1 x n2 x n3, column-major within a frontal
/// slice and slice-major across the third mode, so slice k is the contiguous
/// n1 x n2 block starting at data() + k*n1*n2.
template <typename T>
class Tensor3 {
 public:
  using value_type = T;
  using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
  using MapType = Eigen::Map<Matrix>;
  using ConstMapType = Eigen::Map<const Matrix>;

  Tensor3() = default;

  Tensor3(index_t n1, index_t n2, index_t n3)
      : n1_(n1), n2_(n2), n3_(n3), v_(static_cast<std::size_t>(n1 * n2 * n3), T{}) {
    if (n1 < 1 || n2 < 1 || n3 < 1) {
      throw DimensionMismatch("Tensor3: extents must be positive");
    }
  }

  static Tensor3 zeros(index_t n1, index_t n2, index_t n3) { return Tensor3(n1, n2, n3); }

  index_t n1() const noexcept { return n1_; }
  index_t n2() const noexcept { return n2_; }
  index_t n3() const noexcept { return n3_; }
  index_t size() const noexcept { return n1_ * n2_ * n3_; }
  bool empty() const noexcept { return v_.empty(); }

  T& operator()(index_t i, index_t j, index_t k) { return v_[idx(i, j, k)]; }
  const T& operator()(index_t i, index_t j, index_t k) const { return v_[idx(i, j, k)]; }

  T* data() noexcept { return v_.data(); }
  const T* data() const noexcept { return v_.data(); }

  /// Frontal slice k as an n1 x n2 matrix view.
  MapType slice(index_t k) { return MapType(data() + k * n1_ * n2_, n1_, n2_); }
  ConstMapType slice(index_t k) const { return ConstMapType(data() + k * n1_ * n2_, n1_, n2_); }

  /// The whole tensor as an (n1*n2) x n3 matrix whose column k is slice k.
  MapType mode3_view() { return MapType(data(), n1_ * n2_, n3_); }
  ConstMapType mode3_view() const { return ConstMapType(data(), n1_ * n2_, n3_); }

  /// Flat view of all entries.
  Eigen::Map<Eigen::Matrix<T, Eigen::Dynamic, 1>> vec() {
    return {data(), static_cast<Eigen::Index>(v_.size())};
  }
  Eigen::Map<const Eigen::Matrix<T, Eigen::Dynamic, 1>> vec() const {
    return {data(), static_cast<Eigen::Index>(v_.size())};
  }

  bool same_dims(const Tensor3& o) const noexcept {
    return n1_ == o.n1_ && n2_ == o.n2_ && n3_ == o.n3_;
  }

  Tensor3& operator+=(const Tensor3& o) {
    require_same_dims(o, "+=");
    vec() += o.vec();
    return *this;
  }
  Tensor3& operator-=(const Tensor3& o) {
    require_same_dims(o, "-=");
    vec() -= o.vec();
    return *this;
  }
  Tensor3& operator*=(T s) {
    vec() *= s;
    return *this;
  }

  friend Tensor3 operator+(Tensor3 a, const Tensor3& b) { return a += b; }
  friend Tensor3 operator-(Tensor3 a, const Tensor3& b) { return a -= b; }
  friend Tensor3 operator*(T s, Tensor3 a) { return a *= s; }
  friend Tensor3 operator*(Tensor3 a, T s) { return a *= s; }
  friend Tensor3 operator-(Tensor3 a) { return a *= T(-1); }

  bool all_finite() const {
    for (const T& x : v_) {
      if constexpr (detail::is_complex_v<T>) {
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
      } else {
        if (!std::isfinite(x)) return false;
      }
    }
    return true;
  }

 private:
  std::size_t idx(index_t i, index_t j, index_t k) const {
    return static_cast<std::size_t>(i + j * n1_ + k * n1_ * n2_);
  }
  void require_same_dims(const Tensor3& o, const char* op) const {
    if (!same_dims(o)) {
      throw DimensionMismatch(std::string("Tensor3: operand extents differ in ") + op);
    }
  }

  index_t n1_ = 0, n2_ = 0, n3_ = 0;
  std::vector<T> v_;
};

using DenseTensor3 = Tensor3<double>;
using CTensor3 = Tensor3<cxd>;

/// Identity tensor: first frontal slice is the identity matrix, the rest zero.
template <typename T = double>
Tensor3<T> identity_tensor(index_t n, index_t n3) {
  Tensor3<T> t(n, n, n3);
  t.slice(0).setIdentity();
  return t;
}

inline CTensor3 to_complex(const DenseTensor3& t) {
  CTensor3 c(t.n1(), t.n2(), t.n3());
  c.vec() = t.vec().cast<cxd>();
  return c;
}

/// Real part; the imaginary content is the caller's responsibility.
inline DenseTensor3 real_part(const CTensor3& t) {
  DenseTensor3 r(t.n1(), t.n2(), t.n3());
  r.vec() = t.vec().real();
  return r;
}

/// Scalar inner product sum_{ijk} a_{ijk} b_{ijk}; conjugate-linear in the
/// first argument for complex tensors.
inline double inner(const DenseTensor3& a, const DenseTensor3& b) {
  if (!a.same_dims(b)) throw DimensionMismatch("inner: extents differ");
  return a.vec().dot(b.vec());
}
inline cxd inner(const CTensor3& a, const CTensor3& b) {
  if (!a.same_dims(b)) throw DimensionMismatch("inner: extents differ");
  return a.vec().dot(b.vec());  // Eigen dot conjugates the first argument
}

template <typename T>
double fro_norm(const Tensor3<T>& a) {
  return a.vec().norm();
}

template <typename T>
double fro_dist(const Tensor3<T>& a, const Tensor3<T>& b) {
  if (!a.same_dims(b)) throw DimensionMismatch("fro_dist: extents differ");
  return (a.vec() - b.vec()).norm();
}

/// Relative Frobenius error ||a - b|| / max(||b||, floor).
template <typename T>
double rel_error(const Tensor3<T>& a, const Tensor3<T>& b, double floor = 1e-300) {
  return fro_dist(a, b) / std::max(fro_norm(b), floor);
}

}  // namespace tsylv
