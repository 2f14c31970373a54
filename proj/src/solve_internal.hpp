#pragma once

#include <optional>
#include <vector>

#include "tcmdp/mdp.hpp"

// Library-internal solver entry points. tc_solve validates the parent
// instance once and prepares the shared kernel once, instead of repeating
// both in every segment solve.
namespace tcmdp::detail {

// Shared kernel in compressed-row form, one row per (a, s) pair in table
// order. Columns stay ascending, so accumulating the stored entries yields
// bit-for-bit the same sums as the dense row (skipped entries are exact
// zeros).
struct SparseKernel {
  std::vector<std::size_t> row_start;
  std::vector<int> col;
  std::vector<double> val;
};

// Builds the compressed form when a time-homogeneous kernel is mostly
// zeros, which is the normal case for graph-traversal instances.
std::optional<SparseKernel> try_sparse_kernel(const Instance& inst);

// Backward induction without re-validating the instance. `sparse` may be
// null; when given it must describe the instance's shared kernel.
SolveResult solve_prepared(const Instance& inst, const SparseKernel* sparse);

}  // namespace tcmdp::detail
