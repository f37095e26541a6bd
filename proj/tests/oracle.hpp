#pragma once

#include <cstdint>
#include <vector>

#include "simperm/cube.hpp"

namespace oracle {

// Direct evaluation of f_{i,J,h} on a bit vector, independent of SimplePerm.
inline std::vector<int> eval(const std::vector<int>& x, int target, const std::vector<int>& controls,
                             std::uint64_t table) {
  std::uint64_t addr = 0;
  for (std::size_t k = 0; k < controls.size(); ++k) addr += static_cast<std::uint64_t>(x[static_cast<std::size_t>(controls[k])]) * (1ULL << k);
  auto y = x;
  if ((table >> addr) & 1U) y[static_cast<std::size_t>(target)] = 1 - y[static_cast<std::size_t>(target)];
  return y;
}

inline std::vector<int> to_vec(std::uint64_t v, int n) {
  std::vector<int> x(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) x[static_cast<std::size_t>(j)] = static_cast<int>((v >> j) & 1U);
  return x;
}

inline std::uint64_t from_vec(const std::vector<int>& x) {
  std::uint64_t v = 0;
  for (std::size_t j = 0; j < x.size(); ++j) v |= static_cast<std::uint64_t>(x[j]) << j;
  return v;
}

// Full table of a word by per-gate oracle evaluation.
inline std::vector<std::uint64_t> word_table(const simperm::Word& w, int n) {
  std::vector<std::uint64_t> t(1ULL << n);
  for (std::uint64_t v = 0; v < t.size(); ++v) {
    auto x = to_vec(v, n);
    for (const auto& g : w.gens()) x = eval(x, g.target(), g.controls(), g.table());
    t[v] = from_vec(x);
  }
  return t;
}

// Table of the 3-cycle x -> y -> z -> x.
inline std::vector<std::uint64_t> cycle_table(int n, std::uint64_t x, std::uint64_t y, std::uint64_t z) {
  std::vector<std::uint64_t> t(1ULL << n);
  for (std::uint64_t v = 0; v < t.size(); ++v) t[v] = v == x ? y : v == y ? z : v == z ? x : v;
  return t;
}

// Sign by explicit inversion count.
inline int sign_by_inversions(const std::vector<std::uint64_t>& t) {
  std::uint64_t inv = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t j = i + 1; j < t.size(); ++j) inv += t[i] > t[j];
  }
  return inv % 2 ? -1 : 1;
}

inline std::uint64_t falling(std::uint64_t n, int k) {
  std::uint64_t r = 1;
  for (int i = 0; i < k; ++i) r *= n - static_cast<std::uint64_t>(i);
  return r;
}

}  // namespace oracle
