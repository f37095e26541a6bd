#pragma once

#include <vector>

#include "simperm/tuple_matrix.hpp"

namespace simperm {

// Column partition C_1, ..., C_p, C of {0..n-1}. Blocks take indices
// 0..p*w-1 in order; the rest is the tail C.
struct Partition {
  int n = 0;
  int w = 0;
  int p = 0;
  std::vector<std::vector<int>> blocks;
  std::vector<int> tail;

  int tail_size() const { return static_cast<int>(tail.size()); }
  // Block containing column c, or -1 for tail columns.
  int block_of(int c) const;
};

enum class PartitionMode { logarithmic, explicit_width };

// logarithmic: w = ceil(10 (log2 k + log2 n)), must satisfy w <= n/4.
// explicit_width: caller's w. Both use p = ceil(n / 2w).
Partition make_partition(int n, int w, int k, PartitionMode mode);

bool is_generic(const TupleMatrix& m, const Partition& part);

// 1 - p * C(k,2) * 2^(1-w)
double generic_fraction_bound(const Partition& part, int k);

}  // namespace simperm
