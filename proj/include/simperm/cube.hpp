#pragma once

// Bit-level representation of the cube {0,1}^n and of width-w simple
// permutations acting on it.
//
// Index convention: coordinates are 0-based. Coordinate j here is coordinate
// j+1 in 1-based notation. A point is stored as an unsigned integer whose bit
// j is coordinate j.
//
// Truth tables: a width-w generator with ordered controls (j_0, ..., j_{w-1})
// evaluates its table at address a = sum_k x_{j_k} 2^k, i.e. the first control
// is the least significant address bit.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "simperm/seed_stream.hpp"

namespace simperm {

inline constexpr int kMinDim = 3;
inline constexpr int kMaxDim = 64;
inline constexpr int kMaxTableDim = 24;
inline constexpr int kMaxWidth = 6;

class CubePoint {
 public:
  CubePoint(int n, std::uint64_t bits);

  // "0110..." with character j = coordinate j.
  static CubePoint from_bits_string(const std::string& s);
  // Hex of the integer value; the dimension must be supplied.
  static CubePoint from_hex(int n, const std::string& hex);

  int dim() const { return n_; }
  std::uint64_t bits() const { return bits_; }
  bool bit(int j) const { return (bits_ >> j) & 1U; }
  CubePoint flipped(int j) const;

  std::string to_bits_string() const;
  std::string to_hex() const;

  friend bool operator==(const CubePoint&, const CubePoint&) = default;

 private:
  std::uint64_t bits_;
  int n_;
};

int hamming_distance(const CubePoint& a, const CubePoint& b);

// f_{i,J,h}: x_i ^= h(x_J). Width 0 tables are 1 bit (constant flip or nop).
class SimplePerm {
 public:
  SimplePerm(int target, std::span<const int> controls, std::uint64_t table);
  SimplePerm(int target, std::initializer_list<int> controls, std::uint64_t table)
      : SimplePerm(target, std::span<const int>(controls.begin(), controls.size()), table) {}

  int target() const { return target_; }
  int width() const { return width_; }
  int control(int k) const { return controls_[static_cast<std::size_t>(k)]; }
  std::vector<int> controls() const;
  std::uint64_t table() const { return table_; }
  bool is_nop() const { return table_ == 0; }
  // Largest coordinate touched (target or control).
  int max_index() const;
  bool uses(int index) const;

  // Unchecked evaluation on a raw bit pattern.
  std::uint64_t apply_bits(std::uint64_t x) const {
    unsigned addr = 0;
    for (int k = 0; k < width_; ++k) {
      addr |= static_cast<unsigned>((x >> controls_[static_cast<std::size_t>(k)]) & 1U) << k;
    }
    return x ^ (((table_ >> addr) & 1U) << target_);
  }

  // Index map: coordinate c becomes map[c].
  SimplePerm relabeled(std::span<const int> map) const;
  // Same indices, identity table.
  SimplePerm as_nop() const;

  friend bool operator==(const SimplePerm&, const SimplePerm&) = default;

 private:
  std::array<std::uint8_t, kMaxWidth> controls_{};
  std::uint8_t target_ = 0;
  std::uint8_t width_ = 0;
  std::uint64_t table_ = 0;
};

CubePoint apply_perm(const SimplePerm& p, const CubePoint& x);

// Extends p to `width` controls by appending the first unused indices from
// `candidates`. The new controls are ignored by the table, so the action on
// the cube is unchanged.
SimplePerm pad_to_width(const SimplePerm& p, int width, std::span<const int> candidates);

struct BlockSpan {
  std::string label;
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive
  friend bool operator==(const BlockSpan&, const BlockSpan&) = default;
};

// Sequence of generators applied left to right: gens[0] acts first.
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<SimplePerm> gens) : gens_(std::move(gens)) {}

  std::size_t size() const { return gens_.size(); }
  bool empty() const { return gens_.empty(); }
  const SimplePerm& operator[](std::size_t i) const { return gens_[i]; }
  const std::vector<SimplePerm>& gens() const { return gens_; }
  const std::vector<BlockSpan>& spans() const { return spans_; }

  void push(const SimplePerm& g) { gens_.push_back(g); }
  void reserve(std::size_t n) { gens_.reserve(n); }
  void clear() {
    gens_.clear();
    spans_.clear();
  }
  // Appends `other`, carrying its spans along (shifted).
  void append(const Word& other);
  // Labels [begin, size()) with `label`.
  void label_tail(std::size_t begin, std::string label);
  void add_span(BlockSpan span);

  // Inverse word: every generator is an involution, so reversal inverts.
  Word reversed() const;
  // Label of the last-added span covering position i, or "".
  std::string label_at(std::size_t i) const;
  int max_index() const;
  Word relabeled(std::span<const int> map) const;
  void relabel(std::span<const int> map);

  std::uint64_t apply_bits(std::uint64_t x) const {
    for (const auto& g : gens_) x = g.apply_bits(x);
    return x;
  }

  friend bool operator==(const Word&, const Word&) = default;

 private:
  std::vector<SimplePerm> gens_;
  std::vector<BlockSpan> spans_;
};

CubePoint apply_word(const Word& w, const CubePoint& x);

// Census of width-w generators on n coordinates: all (i, ordered J, h).
struct SigmaSpec {
  int n = 0;
  int w = 2;

  void validate() const;
  std::uint64_t index_tuples() const;  // n * (n-1) * ... * (n-w)
  std::uint64_t table_count() const;   // 2^(2^w)
  std::uint64_t count() const { return index_tuples() * table_count(); }
};

// Enumeration order: target ascending, then J lexicographically, then table.
std::vector<SimplePerm> enumerate_sigma(const SigmaSpec& spec);
SimplePerm sample_sigma(const SigmaSpec& spec, SeedStream& rng);
// Position of p in enumerate_sigma order. p must have width spec.w.
std::uint64_t sigma_rank(const SigmaSpec& spec, const SimplePerm& p);
SimplePerm sigma_unrank(const SigmaSpec& spec, std::uint64_t rank);

// Image of every point of {0,1}^n. n <= 24.
std::vector<std::uint32_t> word_to_table(const Word& w, int n);
std::vector<std::uint32_t> identity_table(int n);
// +1 or -1, via cycle count of the full table.
int word_sign(const Word& w, int n);
int table_sign(std::span<const std::uint32_t> table);

}  // namespace simperm
