#include "tsylv/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <vector>

namespace tsylv {

namespace {

constexpr char kMagic[4] = {'T', 'T', '3', 'D'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "TT3D I/O assumes a little-endian host");

template <typename T>
T read_scalar(std::istream& in, const char* what) {
  T v;
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw TruncatedFile(std::string("TT3D: file ends inside ") + what);
  return v;
}

}  // namespace

DenseTensor3 read_tt3d(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TruncatedFile("TT3D: cannot open '" + path + "'");

  char magic[4];
  in.read(magic, 4);
  if (!in) throw TruncatedFile("TT3D: file ends inside magic");
  if (std::memcmp(magic, kMagic, 4) != 0) {
    throw BadMagic("TT3D: '" + path + "' does not start with TT3D");
  }
  const auto version = read_scalar<std::uint32_t>(in, "version");
  if (version != kVersion) {
    throw BadVersion("TT3D: unsupported version " + std::to_string(version));
  }
  const auto n1 = read_scalar<std::uint64_t>(in, "extents");
  const auto n2 = read_scalar<std::uint64_t>(in, "extents");
  const auto n3 = read_scalar<std::uint64_t>(in, "extents");
  if (n1 == 0 || n2 == 0 || n3 == 0 || n1 * n2 * n3 > (1ull << 34)) {
    throw BadVersion("TT3D: implausible extents in header");
  }

  DenseTensor3 t(static_cast<index_t>(n1), static_cast<index_t>(n2), static_cast<index_t>(n3));
  in.read(reinterpret_cast<char*>(t.data()),
          static_cast<std::streamsize>(sizeof(double) * t.size()));
  if (in.gcount() != static_cast<std::streamsize>(sizeof(double) * t.size())) {
    throw TruncatedFile("TT3D: file shorter than header promises");
  }
  if (!t.all_finite()) {
    throw NonFiniteValue("TT3D: '" + path + "' contains NaN or Inf values");
  }
  return t;
}

void write_tt3d(const DenseTensor3& t, const std::string& path) {
  if (!t.all_finite()) {
    throw NonFiniteValue("TT3D: refusing to write NaN or Inf values");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw TruncatedFile("TT3D: cannot open '" + path + "' for writing");
  out.write(kMagic, 4);
  const std::uint32_t version = kVersion;
  out.write(reinterpret_cast<const char*>(&version), sizeof(version));
  const std::uint64_t dims[3] = {static_cast<std::uint64_t>(t.n1()),
                                 static_cast<std::uint64_t>(t.n2()),
                                 static_cast<std::uint64_t>(t.n3())};
  out.write(reinterpret_cast<const char*>(dims), sizeof(dims));
  out.write(reinterpret_cast<const char*>(t.data()),
            static_cast<std::streamsize>(sizeof(double) * t.size()));
  if (!out) throw TruncatedFile("TT3D: short write to '" + path + "'");
}

}  // namespace tsylv
