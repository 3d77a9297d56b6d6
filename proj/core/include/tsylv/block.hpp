#pragma once

#include <numeric>
#include <vector>

#include "tsylv/tensor.hpp"

namespace tsylv {

/// Partition of a composite tensor into sub-tensor blocks along modes 1 and 2
/// (frontal slices are composed blockwise; mode 3 is shared).
struct BlockLayout {
  std::vector<index_t> row_extents;
  std::vector<index_t> col_extents;

  index_t rows() const { return std::accumulate(row_extents.begin(), row_extents.end(), index_t{0}); }
  index_t cols() const { return std::accumulate(col_extents.begin(), col_extents.end(), index_t{0}); }
  index_t block_count() const {
    return static_cast<index_t>(row_extents.size() * col_extents.size());
  }
};

/// Assemble a composite tensor from row-major blocks matching the layout.
template <typename T>
Tensor3<T> block_compose(const BlockLayout& layout, const std::vector<Tensor3<T>>& blocks) {
  if (layout.row_extents.empty() || layout.col_extents.empty()) {
    throw DimensionMismatch("block_compose: empty layout");
  }
  if (static_cast<index_t>(blocks.size()) != layout.block_count()) {
    throw DimensionMismatch("block_compose: expected " + std::to_string(layout.block_count()) +
                            " blocks, got " + std::to_string(blocks.size()));
  }
  const index_t n3 = blocks.front().n3();
  Tensor3<T> out(layout.rows(), layout.cols(), n3);
  index_t r0 = 0;
  std::size_t b = 0;
  for (index_t bi = 0; bi < static_cast<index_t>(layout.row_extents.size()); ++bi) {
    index_t c0 = 0;
    for (index_t bj = 0; bj < static_cast<index_t>(layout.col_extents.size()); ++bj, ++b) {
      const Tensor3<T>& blk = blocks[b];
      if (blk.n1() != layout.row_extents[bi] || blk.n2() != layout.col_extents[bj] ||
          blk.n3() != n3) {
        throw DimensionMismatch("block_compose: block (" + std::to_string(bi) + "," +
                                std::to_string(bj) + ") extents do not match layout");
      }
      for (index_t k = 0; k < n3; ++k) {
        out.slice(k).block(r0, c0, blk.n1(), blk.n2()) = blk.slice(k);
      }
      c0 += layout.col_extents[bj];
    }
    r0 += layout.row_extents[bi];
  }
  return out;
}

/// Extract block (bi, bj) of a composite tensor.
template <typename T>
Tensor3<T> block_slice(const Tensor3<T>& t, const BlockLayout& layout, index_t bi, index_t bj) {
  if (bi < 0 || bi >= static_cast<index_t>(layout.row_extents.size()) || bj < 0 ||
      bj >= static_cast<index_t>(layout.col_extents.size())) {
    throw DimensionMismatch("block_slice: block index out of range");
  }
  if (layout.rows() != t.n1() || layout.cols() != t.n2()) {
    throw DimensionMismatch("block_slice: layout does not cover the tensor");
  }
  index_t r0 = 0, c0 = 0;
  for (index_t i = 0; i < bi; ++i) r0 += layout.row_extents[i];
  for (index_t j = 0; j < bj; ++j) c0 += layout.col_extents[j];
  Tensor3<T> out(layout.row_extents[bi], layout.col_extents[bj], t.n3());
  for (index_t k = 0; k < t.n3(); ++k) {
    out.slice(k) = t.slice(k).block(r0, c0, out.n1(), out.n2());
  }
  return out;
}

/// [a b]: horizontal concatenation along mode 2.
template <typename T>
Tensor3<T> hconcat(const std::vector<Tensor3<T>>& blocks) {
  BlockLayout layout;
  layout.row_extents = {blocks.at(0).n1()};
  for (const auto& b : blocks) layout.col_extents.push_back(b.n2());
  return block_compose(layout, blocks);
}

/// [a; b]: vertical concatenation along mode 1.
template <typename T>
Tensor3<T> vconcat(const std::vector<Tensor3<T>>& blocks) {
  BlockLayout layout;
  layout.col_extents = {blocks.at(0).n2()};
  for (const auto& b : blocks) layout.row_extents.push_back(b.n1());
  return block_compose(layout, blocks);
}

}  // namespace tsylv
