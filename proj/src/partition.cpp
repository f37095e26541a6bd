#include <cmath>

#include "simperm/errors.hpp"
#include "simperm/partition.hpp"

namespace simperm {

int Partition::block_of(int c) const {
  if (c < 0 || c >= p * w) return -1;
  return c / w;
}

Partition make_partition(int n, int w, int k, PartitionMode mode) {
  if (n < 1 || n > kMaxDim) throw SpecError("partition: n out of range");
  if (mode == PartitionMode::logarithmic) {
    if (k < 1) throw SpecError("partition: k must be positive");
    const double wd = 10.0 * (std::log2(static_cast<double>(k)) + std::log2(static_cast<double>(n)));
    w = static_cast<int>(std::ceil(wd - 1e-12));
    if (4 * w > n) {
      throw SpecError("logarithmic partition needs w <= n/4 but w = 10(log2 k + log2 n) = " +
                      std::to_string(w) + " at n=" + std::to_string(n) + ", k=" + std::to_string(k) +
                      "; use explicit mode with a chosen w");
    }
  }
  if (w < 1) throw SpecError("partition: block width must be positive");
  Partition part;
  part.n = n;
  part.w = w;
  part.p = (n + 2 * w - 1) / (2 * w);
  if (part.p * w > n) throw SpecError("partition: blocks do not fit in n columns");
  for (int i = 0; i < part.p; ++i) {
    std::vector<int> b;
    for (int c = i * w; c < (i + 1) * w; ++c) b.push_back(c);
    part.blocks.push_back(std::move(b));
  }
  for (int c = part.p * w; c < n; ++c) part.tail.push_back(c);
  return part;
}

bool is_generic(const TupleMatrix& m, const Partition& part) {
  if (m.dim() != part.n) throw ContractError("matrix and partition dimensions differ");
  for (const auto& b : part.blocks) {
    if (!m.rows_distinct_on(b)) return false;
  }
  return true;
}

double generic_fraction_bound(const Partition& part, int k) {
  const double pairs = 0.5 * k * (k - 1);
  return 1.0 - part.p * pairs * std::ldexp(1.0, 1 - part.w);
}

}  // namespace simperm
