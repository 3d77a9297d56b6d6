#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace tsylv {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Operand extents do not conform (products, folds, block layouts, ...).
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Generated or loaded problem is too small for the stencil being built.
class DimensionTooSmall : public Error {
 public:
  using Error::Error;
};

/// A spectral tensor flagged as conjugate-symmetric failed the symmetry or
/// imaginary-residue check on inverse transform.
class SymmetryViolation : public Error {
 public:
  using Error::Error;
};

/// A tube (or a lateral column during normalization) has a Fourier
/// coefficient below the singularity threshold. `index` is the offending
/// column when raised from a QR/Arnoldi loop, -1 otherwise.
class SingularTube : public Error {
 public:
  explicit SingularTube(const std::string& what, std::int64_t index = -1)
      : Error(what), index_(index) {}
  std::int64_t index() const noexcept { return index_; }

 private:
  std::int64_t index_;
};

/// The spectra of the two Sylvester coefficients intersect (up to the
/// working threshold); the equation has no unique solution.
class SingularPencil : public Error {
 public:
  using Error::Error;
};

/// A per-slice eigenvalue iteration failed to converge.
class ConvergenceFailure : public Error {
 public:
  explicit ConvergenceFailure(const std::string& what, std::int64_t slice = -1)
      : Error(what), slice_(slice) {}
  std::int64_t slice() const noexcept { return slice_; }

 private:
  std::int64_t slice_;
};

/// Arnoldi seed is numerically zero.
class ZeroSeed : public Error {
 public:
  using Error::Error;
};

/// The projected Hessenberg system of tFOM is singular to working precision.
class SingularProjection : public Error {
 public:
  using Error::Error;
};

/// Rank-deficient block encountered inside the tubal block Arnoldi loop.
class BlockBreakdown : public Error {
 public:
  explicit BlockBreakdown(const std::string& what, std::int64_t step = -1)
      : Error(what), step_(step) {}
  std::int64_t step() const noexcept { return step_; }

 private:
  std::int64_t step_;
};

// Tensor file format errors.
class BadMagic : public Error {
 public:
  using Error::Error;
};
class BadVersion : public Error {
 public:
  using Error::Error;
};
class TruncatedFile : public Error {
 public:
  using Error::Error;
};
class NonFiniteValue : public Error {
 public:
  using Error::Error;
};

}  // namespace tsylv
