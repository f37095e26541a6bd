#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "simperm/cube.hpp"
#include "simperm/partition.hpp"
#include "simperm/seed_stream.hpp"
#include "simperm/tuple_matrix.hpp"

namespace simperm {

// Walk on X^(k) driven by uniform generators from Sigma_w.
struct SchreierSpec {
  int n = 3;
  int k = 1;
  int w = 2;
};

// Schreier walk restricted to generic matrices; rejected moves stay put.
struct GenericRestrictedSpec {
  int n = 0;
  int k = 1;
  int w = 2;  // block width of the partition (generators are always width 2)
};

// Clique coloring: pick a row, recolor uniformly among the q - (k-1) colors
// not used by the other rows (the current color included).
struct CliqueColoringSpec {
  int k = 2;
  int q = 4;
};

// With probability 1/2 stay, else flip a uniform coordinate of {0,1}^d.
struct LazyHypercubeSpec {
  int d = 1;
};

// Generic k x (p*w + m) matrices. With probability 1/2 a lazy hypercube step
// on the k*m tail bits, else a clique-coloring step inside a random block.
struct ProductGlauberSpec {
  int k = 2;
  int w = 2;
  int p = 2;
  int m = 2;
};

// Uniform 3-cycle (x y z) of the cube applied to every row.
struct ThreeCycleWalkSpec {
  int n = 3;
  int k = 1;
};

// Two-row walk in (s, u = s ^ t) coordinates: pick i, then XOR bit i of s
// with Bern(1/2) and of u with Bern(p_l / 2), independently, where l counts
// the ones of u off position i.
struct TwoRowSpec {
  int n = 3;
  int w = 2;
};

using ChainSpec = std::variant<SchreierSpec, GenericRestrictedSpec, CliqueColoringSpec,
                               LazyHypercubeSpec, ProductGlauberSpec, ThreeCycleWalkSpec, TwoRowSpec>;

std::string chain_name(const ChainSpec& spec);

inline constexpr std::size_t kMaxStates = 20000;

// p_l = 1 - prod_{j=1..w} (1 - l / (n - j))
double two_row_hit_probability(int n, int w, int l);

struct Transition {
  std::uint64_t to;
  double prob;
};

class Chain {
 public:
  explicit Chain(ChainSpec spec);

  const ChainSpec& spec() const { return spec_; }
  std::string name() const { return chain_name(spec_); }

  // |V| from a closed formula (may exceed what can be enumerated).
  double state_count() const;
  // Sorted state keys. Throws ResourceError above `limit`.
  std::vector<std::uint64_t> states(std::size_t limit = kMaxStates) const;
  bool contains(std::uint64_t state) const;

  std::uint64_t step(std::uint64_t state, SeedStream& rng) const;
  // Exact outgoing distribution, merged by target and sorted.
  std::vector<Transition> transitions(std::uint64_t state) const;

  // Key layout helpers for matrix-valued chains.
  int rows() const;
  int row_bits() const;
  const Partition* partition() const { return part_.blocks.empty() ? nullptr : &part_; }
  const std::vector<SimplePerm>& generators() const { return gens_; }

 private:
  void require(std::uint64_t state) const;

  ChainSpec spec_;
  Partition part_;
  std::vector<SimplePerm> gens_;
};

inline Chain make_chain(ChainSpec spec) { return Chain(std::move(spec)); }
inline std::uint64_t chain_step(const Chain& c, std::uint64_t state, SeedStream& rng) {
  return c.step(state, rng);
}

// Sorted keys of all k-tuples of distinct b-bit values below `limit_value`
// (row 0 most significant).
std::vector<std::uint64_t> distinct_tuples(int bits, int k, std::uint64_t values, std::size_t limit);

// Uniform element of X^(k) at dimension n.
TupleMatrix random_tuple(int n, int k, SeedStream& rng);
// Uniform generic matrix, by rejection.
TupleMatrix random_generic(const Partition& part, int k, SeedStream& rng);

// Count of generic matrices: ((2^w)_k)^p * 2^(|C| k).
double generic_count(const Partition& part, int k);

// Partition for ProductGlauber states: p blocks of width w, then m tail columns.
Partition product_partition(int w, int p, int m);

}  // namespace simperm
