#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "simperm/chains.hpp"
#include "simperm/partition.hpp"
#include "simperm/spectral.hpp"

namespace simperm {

using DistVector = std::vector<double>;

double tv_distance(const DistVector& p, const DistVector& q);
DistVector uniform_dist(std::size_t size);
DistVector point_mass(std::size_t size, std::size_t at);

// Mixture a * p + (1 - a) * q.
DistVector mix_dist(double a, const DistVector& p, const DistVector& q);
// Probability of the event and the distribution conditioned on it.
double event_probability(const DistVector& p, const std::vector<bool>& event);
DistVector condition_on(const DistVector& p, const std::vector<bool>& event);

inline constexpr std::size_t kAllStartsLimit = 4096;

struct MixingOptions {
  double eps = 1.0 / 128;      // evolve until the worst TV is below this
  std::size_t max_steps = 100000;
  bool all_starts = true;      // ignored above kAllStartsLimit
};

struct MixingProfile {
  std::vector<double> tv;      // tv[t] = max over starts of d(P^t(v, .), uniform)
  std::size_t states = 0;
  std::size_t starts = 0;
  bool all_starts = true;      // false: only the first state (caveat)
  bool stalled = false;        // TV stopped decreasing before reaching eps
};

// Uniform stationary law is assumed (checked: column sums are 1).
MixingProfile mixing_profile(const TransitionMatrix& m, const MixingOptions& opt = {});
MixingProfile mixing_profile(const ChainSpec& spec, const MixingOptions& opt = {});

// First t with tv[t] < eps; empty if never.
std::optional<std::size_t> mixing_time(const MixingProfile& prof, double eps);

bool profile_nonincreasing(const MixingProfile& prof, double tol = 1e-12);

struct SubmultReport {
  bool holds = true;
  std::optional<std::size_t> tau_quarter;
  std::vector<std::pair<int, std::optional<std::size_t>>> rows;  // (l, tau(2^{-l-1}))
};

// tau(2^{-l-1}) <= l tau(1/4) for l = 1..max_l.
SubmultReport check_submultiplicative(const MixingProfile& prof, int max_l = 5);

struct ConsistencyRow {
  double eps = 0;
  std::optional<std::size_t> tau;
  double upper = 0;        // ln(|V|/eps) / gap
  double lower = 0;        // ln(1/2eps) / (tau + ln(1/2eps)), i.e. tau >= (1/gap - 1) ln(1/2eps)
  bool upper_ok = true;    // tau <= upper
  bool lower_ok = true;    // gap >= lower
  // ln(1/2eps) / tau: not a valid bound in general, reported only.
  double lower_literal = 0;
  bool lower_literal_ok = true;
};

struct ConsistencyReport {
  double gap = 0;
  std::size_t states = 0;
  bool lazy = false;
  bool symmetric = false;
  bool non_mixing = false;  // gap == 0 / tau infinite
  bool violated = false;
  std::vector<ConsistencyRow> rows;
};

ConsistencyReport gap_mixing_consistency(const TransitionMatrix& m, const std::vector<double>& eps);
ConsistencyReport gap_mixing_consistency(const ChainSpec& spec, const std::vector<double>& eps);

// --- sampling probes --------------------------------------------------------

struct CollisionEstimate {
  double q2 = 0;      // unbiased pair-collision probability
  double sigma = 0;   // standard error of q2
  double bound = 0;
  bool within = true; // q2 + z sigma <= bound
  double renyi2() const;  // -log2 q2
};

// From a histogram of counts over T samples.
CollisionEstimate collision_from_counts(const std::vector<std::uint32_t>& counts, std::uint64_t trials,
                                        double bound, double z = 3.0);
struct CollisionSums {
  long double pairs = 0;    // sum c (c-1)
  long double triples = 0;  // sum c (c-1) (c-2)
  void add(std::uint64_t c) {
    const long double x = static_cast<long double>(c);
    pairs += x * (x - 1);
    triples += x * (x - 1) * (x - 2);
  }
};
CollisionEstimate collision_from_sums(const CollisionSums& s, std::uint64_t trials, double bound, double z = 3.0);

struct EntropyPosition {
  std::size_t position = 0;  // 1-based l
  CollisionEstimate joint;
  CollisionEstimate prefix;
  CollisionEstimate generator;
};

struct EntropyReport {
  int n = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  double slack = 64;
  double z = 3.0;
  std::size_t length = 0;
  std::string mode;
  std::vector<EntropyPosition> positions;
  bool joint_ok = true;
  bool prefix_ok = true;
  bool generator_ok = true;
  double worst_joint = 0, worst_prefix = 0, worst_generator = 0;
};

struct EntropyOptions {
  double slack = 64;
  double z = 3.0;
  int threads = 1;
  std::size_t memory_bytes = std::size_t{1} << 30;  // key buffer per pass
};

// Smallest trial count for which the joint bound slack 2^-n / n^3 expects at
// least 100 colliding pairs.
std::uint64_t entropy_min_trials(int n, double slack);

EntropyReport min_entropy_probe(int n, std::uint64_t trials, std::uint64_t seed, const EntropyOptions& opt = {});

struct GenericitySurvey {
  int n = 0, k = 0, w = 0, p = 0;
  std::uint64_t trials = 0;
  std::uint64_t walk_steps = 0;
  double bound = 0;
  double uniform_fraction = 0, uniform_sigma = 0;
  double walk_fraction = 0, walk_sigma = 0;
  bool uniform_ok = true, walk_ok = true;
};

// Default walk length: ceil(n log2 n * w).
std::uint64_t default_walk_steps(int n, int w);

GenericitySurvey genericity_survey(int n, int k, const Partition& part, std::uint64_t trials, std::uint64_t seed,
                                   std::uint64_t walk_steps, int threads = 1);

}  // namespace simperm
