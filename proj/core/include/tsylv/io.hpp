#pragma once

#include <string>

#include "tsylv/tensor.hpp"

namespace tsylv {

/// TT3D binary tensor file: magic "TT3D", u32 LE version (= 1), three u64 LE
/// extents n1 n2 n3, then n1*n2*n3 IEEE-754 float64 LE values in storage
/// order (column-major within a slice, slice-major). Readers reject wrong
/// magic or version, short files, and non-finite values.
DenseTensor3 read_tt3d(const std::string& path);
void write_tt3d(const DenseTensor3& t, const std::string& path);

}  // namespace tsylv
