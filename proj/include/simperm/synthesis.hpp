#pragma once

#include <optional>
#include <string>
#include <vector>

#include "simperm/cube.hpp"
#include "simperm/partition.hpp"
#include "simperm/seed_stream.hpp"
#include "simperm/tuple_matrix.hpp"

namespace simperm {

// ---------------------------------------------------------------------------
// Controlled flip

struct FlipOptions {
  // Use the 4-gate ladder at w = 2 instead of one direct gate.
  bool force_ladder = false;
  // Indices tried first when padding width-1 gates up to width 2.
  std::vector<int> pad;
};

// Flips `target` exactly on inputs whose restriction to `controls` equals
// `pattern` (bit k of pattern is the value required at controls[k]).
// Scratch bits may hold anything and are restored. Lengths: 1 for w <= 2,
// 4w - 4 otherwise (or with force_ladder).
Word synth_controlled_flip(int n, int target, const std::vector<int>& controls,
                           std::uint64_t pattern, const std::vector<int>& scratch,
                           const FlipOptions& opt = {});

// Length of synth_controlled_flip for width w.
std::size_t controlled_flip_length(int w, bool force_ladder = false);

// ---------------------------------------------------------------------------
// 3-cycles

enum class CycleMode {
  full,       // n >= 7, Hamming-3 rule for v4, v5
  relaxed,    // n in {5, 6}: only prefix distinctness for v4, v5
  table,      // n == 4: Schreier-graph search to a fixed base triple
};

struct ThreeCycleWitness {
  std::vector<int> phi;  // coordinate j of x is coordinate phi[j] of v
  CubePoint v4{kMinDim, 0};
  CubePoint v5{kMinDim, 0};
  CycleMode mode = CycleMode::full;
  int phi_attempts = 0;
  int v_attempts = 0;
};

struct ThreeCycle {
  Word word;
  ThreeCycleWitness witness;
};

inline constexpr int kThreeCycleMinDim = 7;
inline constexpr int kRejectionBudget = 1000;

// Fixed word length at dimension n. Throws UnsupportedDimension for n < 4.
std::size_t three_cycle_length(int n);

// labels = false skips block spans (faster; the generators are identical).
ThreeCycle synth_three_cycle(int n, const CubePoint& x, const CubePoint& y, const CubePoint& z,
                             SeedStream& rng, bool labels = true);

// Deterministic construction from a given witness (full/relaxed modes).
Word three_cycle_from_witness(const CubePoint& x, const CubePoint& y, const CubePoint& z,
                              const ThreeCycleWitness& wit, bool labels = true);

// phi applied to a point: bit phi[j] of the result is bit j of x.
CubePoint permute_coords(const CubePoint& x, const std::vector<int>& phi);

// Strict validity: v1' not in {v2', v3'}; v4, v5 at distance >= 3 from each
// other and from v1, v2, v3.
bool validate_witness(const CubePoint& x, const CubePoint& y, const CubePoint& z,
                      const ThreeCycleWitness& wit);
// Validity of phi alone.
bool phi_valid(const CubePoint& x, const CubePoint& y, const CubePoint& z,
               const std::vector<int>& phi);

std::string to_string(CycleMode m);

// ---------------------------------------------------------------------------
// chi-substitution

// Replaces every gate whose three indices all lie in `block` by an 8-gate
// sequence using scratch s1, s2; each new gate touches at most two indices of
// the block. Other gates pass through. Scratch must start and end unchanged
// for the tables to agree, which holds automatically: the template restores it.
Word chi_substitute(const Word& w, const std::vector<int>& block, int s1, int s2);

inline constexpr std::size_t kChiLength = 8;

// ---------------------------------------------------------------------------
// Canonical paths between generic matrices

struct Type1Spec {
  int row = 0;
  int column = 0;  // in the tail C
  int block = 0;   // helper block j
  std::vector<int> scratch;  // w-1 distinct tail columns, excluding `column`
};

struct Type2Spec {
  int row = 0;
  int block = 0;   // block i being rewritten
  int helper = 0;  // block j != i
  std::vector<int> scratch;  // w-1 distinct tail columns
  int s1 = -1;     // chi scratch, tail columns
  int s2 = -1;
  int prefix_length = -1;  // L'; -1 selects type2_prefix_length
};

// Controlled flip of column c on pattern beta over C_j.
Word synth_type1_path(const TupleMatrix& m, const Type1Spec& spec, const Partition& part);

enum class PathStatus { ok, retry };

struct Type2Result {
  PathStatus status = PathStatus::retry;
  Word word;
  Word prefix;          // phi before substitution
  bool split_distinct = false;  // distinct rows on C_i'' (M hat) and C_i' (M' hat)
  std::size_t first_bad_step = 0;  // on retry: first non-generic position
};

Type2Result synth_type2_path(const TupleMatrix& m, const TupleMatrix& m2, const Type2Spec& spec,
                             const Partition& part, SeedStream& rng);

// ceil(w log2 w (1 + 2 log2 k)), at least 1.
int type2_prefix_length(int w, int k);

// Column split of a block: first floor(w/2) columns, rest.
std::vector<int> block_first_half(const std::vector<int>& block);
std::vector<int> block_second_half(const std::vector<int>& block);

// Random specs for the generic comparison.
Type1Spec random_type1_spec(const Partition& part, int row, int column, SeedStream& rng);
Type2Spec random_type2_spec(const Partition& part, int block, int row, SeedStream& rng);

// Replays `w` from m; true iff every intermediate matrix is generic. On
// failure `bad` receives the first offending position.
bool replay_generic(const Word& w, const TupleMatrix& m, const Partition& part,
                    std::size_t* bad = nullptr);

}  // namespace simperm
