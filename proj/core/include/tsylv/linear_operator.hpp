#pragma once

#include <functional>
#include <memory>

#include "tsylv/tproduct.hpp"

namespace tsylv {

/// Matrix-free linear map on n x s x n3 tensors.
struct LinearOperator {
  index_t n = 0;
  index_t s = 0;
  index_t n3 = 0;
  std::function<DenseTensor3(const DenseTensor3&)> apply_fn;

  DenseTensor3 apply(const DenseTensor3& x) const {
    if (x.n1() != n || x.n2() != s || x.n3() != n3) {
      throw DimensionMismatch("LinearOperator: argument extents do not match domain");
    }
    return apply_fn(x);
  }
};

namespace detail {

/// Spectral forms of the Sylvester coefficients, shared by the closure so a
/// solve transforms a and b exactly once.
struct SylvesterSpectral {
  SpectralTensor sa, sb;
  int sign = -1;

  DenseTensor3 apply(const DenseTensor3& x) const {
    const SpectralTensor sx = fft_mode3(x);
    SpectralTensor sy(x.n1(), x.n2(), x.n3(), /*symmetric=*/true);
    const double sgn = static_cast<double>(sign);
    for (index_t k = 0; k < sy.independent_slices(); ++k) {
      sy.slice(k).noalias() = sa.slice(k) * sx.slice(k);
      sy.slice(k).noalias() += sgn * (sx.slice(k) * sb.slice(k));
    }
    sy.mirror_fill();
    return ifft_mode3(sy);
  }
};

}  // namespace detail

/// The Sylvester operator x -> a * x + sign * x * b, applied slice-wise in
/// the spectral domain with the transforms of a and b cached.
inline LinearOperator make_sylvester_operator(const DenseTensor3& a, const DenseTensor3& b,
                                              int sign) {
  if (a.n1() != a.n2() || b.n1() != b.n2()) {
    throw DimensionMismatch("make_sylvester_operator: coefficients must be square");
  }
  if (a.n3() != b.n3()) {
    throw DimensionMismatch("make_sylvester_operator: coefficient depths differ");
  }
  if (sign != 1 && sign != -1) {
    throw DimensionMismatch("make_sylvester_operator: sign must be +/-1");
  }
  auto cached = std::make_shared<detail::SylvesterSpectral>();
  cached->sa = fft_mode3(a);
  cached->sb = fft_mode3(b);
  cached->sign = sign;
  LinearOperator op;
  op.n = a.n1();
  op.s = b.n1();
  op.n3 = a.n3();
  op.apply_fn = [cached](const DenseTensor3& x) { return cached->apply(x); };
  return op;
}

inline LinearOperator make_identity_operator(index_t n, index_t s, index_t n3) {
  LinearOperator op;
  op.n = n;
  op.s = s;
  op.n3 = n3;
  op.apply_fn = [](const DenseTensor3& x) { return x; };
  return op;
}

}  // namespace tsylv
