#pragma once

#include "tsylv/block_krylov.hpp"

namespace tsylv {

/// Block Arnoldi-Sylvester baseline: the Sylvester tensor equation is
/// block-diagonalized by the mode-3 DFT and each independent spectral slice
/// pair (A_k, B_k, C_k) is solved as an ordinary complex matrix equation by
/// the depth-one specialization of the tubal block Arnoldi solver. Reported
/// iterations are the maximum over slices; `report.residual_history` is the
/// history of that slowest slice.
struct BasOutcome {
  DenseTensor3 x;
  SolveReport report;
  std::vector<SolveReport> slice_reports;
};

BasOutcome bas_solve(const DenseTensor3& a, const DenseTensor3& b, const DenseTensor3& c, int m,
                     double tol, int max_restarts, int sign);

}  // namespace tsylv
