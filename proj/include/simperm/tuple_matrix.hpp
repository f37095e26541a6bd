#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "simperm/cube.hpp"

namespace simperm {

// k x n binary matrix with pairwise distinct rows: an element of X^(k).
class TupleMatrix {
 public:
  TupleMatrix(int n, std::vector<std::uint64_t> rows);

  // Packed key, row 0 in the most significant position. Requires k*n <= 64.
  static TupleMatrix from_key(int n, int k, std::uint64_t key);
  std::uint64_t key() const;

  int dim() const { return n_; }
  int k() const { return static_cast<int>(rows_.size()); }
  std::uint64_t row(int r) const { return rows_[static_cast<std::size_t>(r)]; }
  const std::vector<std::uint64_t>& rows() const { return rows_; }
  bool bit(int r, int c) const { return (row(r) >> c) & 1U; }

  // Row r restricted to `cols`, packed with cols[0] as bit 0.
  std::uint64_t restrict_row(int r, std::span<const int> cols) const;
  bool rows_distinct_on(std::span<const int> cols) const;

  TupleMatrix with_bit_flipped(int r, int c) const;
  TupleMatrix with_row(int r, std::uint64_t value) const;

  std::string to_hex() const;

  friend bool operator==(const TupleMatrix&, const TupleMatrix&) = default;

 private:
  int n_;
  std::vector<std::uint64_t> rows_;
};

TupleMatrix apply_word_tuple(const Word& w, const TupleMatrix& m);
TupleMatrix apply_perm_tuple(const SimplePerm& p, const TupleMatrix& m);

}  // namespace simperm
