#include <gtest/gtest.h>

#include <cmath>

#include "simperm/errors.hpp"
#include "simperm/mixing.hpp"

using namespace simperm;

TEST(Distributions, TvAndConditioning) {
  EXPECT_DOUBLE_EQ(tv_distance({1, 0}, {0.5, 0.5}), 0.5);
  EXPECT_DOUBLE_EQ(tv_distance(uniform_dist(4), uniform_dist(4)), 0.0);
  const auto m = mix_dist(0.25, point_mass(2, 0), point_mass(2, 1));
  EXPECT_DOUBLE_EQ(m[0], 0.25);
  const std::vector<bool> ev{true, false, true, false};
  EXPECT_DOUBLE_EQ(event_probability(uniform_dist(4), ev), 0.5);
  const auto c = condition_on(uniform_dist(4), ev);
  EXPECT_DOUBLE_EQ(c[0], 0.5);
  EXPECT_DOUBLE_EQ(c[1], 0.0);
  EXPECT_THROW(condition_on(uniform_dist(2), {false, false}), ContractError);
}

TEST(Mixing, TwoStateProfileIsExact) {
  // Oracle: d(t) = |1 - 2a|^t / 2.
  const double a = 0.2;
  const auto m = TransitionMatrix::from_dense({1 - a, a, a, 1 - a}, 2);
  const auto prof = mixing_profile(m, MixingOptions{1e-6});
  for (std::size_t t = 0; t < prof.tv.size(); ++t) {
    EXPECT_NEAR(prof.tv[t], std::pow(1 - 2 * a, static_cast<double>(t)) / 2, 1e-14);
  }
  const auto tau = mixing_time(prof, 0.25);
  ASSERT_TRUE(tau.has_value());
  EXPECT_EQ(*tau, 2U);
  EXPECT_TRUE(profile_nonincreasing(prof));
}

TEST(Mixing, SchreierProfilesAreMonotoneAndSubmultiplicative) {
  for (const ChainSpec& spec : {ChainSpec{SchreierSpec{3, 1}}, ChainSpec{SchreierSpec{3, 2}}, ChainSpec{SchreierSpec{4, 1}}}) {
    const auto prof = mixing_profile(spec, MixingOptions{1.0 / 128});
    EXPECT_TRUE(profile_nonincreasing(prof));
    EXPECT_TRUE(prof.all_starts);
    EXPECT_FALSE(prof.stalled);
    EXPECT_TRUE(check_submultiplicative(prof, 5).holds);
  }
}

TEST(Mixing, NonMixingChainIsFlagged) {
  const auto m = TransitionMatrix::from_dense({0, 1, 1, 0}, 2);
  const auto rep = gap_mixing_consistency(m, {0.25});
  EXPECT_TRUE(rep.non_mixing);
  EXPECT_FALSE(rep.violated);
}

TEST(Mixing, ConsistencyOnSchreier) {
  const auto rep = gap_mixing_consistency(SchreierSpec{3, 2}, {0.25, 1.0 / 8, 1.0 / 64});
  EXPECT_TRUE(rep.lazy);
  EXPECT_TRUE(rep.symmetric);
  EXPECT_FALSE(rep.non_mixing);
  for (const auto& r : rep.rows) {
    EXPECT_TRUE(r.upper_ok) << r.eps;
    EXPECT_TRUE(r.lower_ok) << r.eps;
  }
}

TEST(Collision, UnbiasedOnUniformCounts) {
  // Oracle: a uniform distribution over G values has q2 = 1/G.
  SeedStream rng(3);
  const std::size_t g = 64;
  std::vector<std::uint32_t> counts(g);
  const std::uint64_t trials = 200000;
  for (std::uint64_t t = 0; t < trials; ++t) ++counts[rng.uniform(g)];
  const auto est = collision_from_counts(counts, trials, 2.0 / g);
  EXPECT_NEAR(est.q2, 1.0 / g, 4 * est.sigma);
  EXPECT_TRUE(est.within);
  EXPECT_NEAR(est.renyi2(), 6.0, 0.05);
}

TEST(Collision, SumsMatchCounts) {
  const std::vector<std::uint32_t> counts{3, 0, 1, 4};
  CollisionSums s;
  for (auto c : counts) s.add(c);
  const auto a = collision_from_counts(counts, 8, 1.0);
  const auto b = collision_from_sums(s, 8, 1.0);
  EXPECT_DOUBLE_EQ(a.q2, b.q2);
  EXPECT_DOUBLE_EQ(a.q2, (3.0 * 2 + 4 * 3) / (8.0 * 7));
}

TEST(Entropy, SmallProbeIsDeterministicAcrossThreads) {
  EntropyOptions one;
  EntropyOptions two;
  two.threads = 2;
  const auto a = min_entropy_probe(5, 2000, 17, one);
  const auto b = min_entropy_probe(5, 2000, 17, two);
  ASSERT_EQ(a.positions.size(), b.positions.size());
  EXPECT_EQ(a.length, 172U);
  for (std::size_t i = 0; i < a.positions.size(); ++i) {
    EXPECT_EQ(a.positions[i].joint.q2, b.positions[i].joint.q2);
    EXPECT_EQ(a.positions[i].generator.q2, b.positions[i].generator.q2);
  }
}

TEST(Entropy, MinTrials) {
  EXPECT_GE(entropy_min_trials(8, 64), 2U);
  const double b = 64 * std::ldexp(1.0, -8) / 512;
  const double t = static_cast<double>(entropy_min_trials(8, 64));
  EXPECT_GE(t * (t - 1) * b, 200.0 - 1e-9);
}

TEST(Genericity, KOneIsAlwaysGeneric) {
  const auto part = make_partition(12, 4, 1, PartitionMode::explicit_width);
  const auto s = genericity_survey(12, 1, part, 2000, 5, 10);
  EXPECT_DOUBLE_EQ(s.uniform_fraction, 1.0);
  EXPECT_DOUBLE_EQ(s.walk_fraction, 1.0);
}

TEST(Distributions, ConditioningBoundsOnRandomSpaces) {
  SeedStream rng(77);
  for (int rep = 0; rep < 500; ++rep) {
    const std::size_t size = 2 + rng.uniform(30);
    DistVector p(size);
    double total = 0;
    for (auto& v : p) total += (v = rng.unit());
    for (auto& v : p) v /= total;
    std::vector<bool> a(size), x(size);
    bool any = false;
    for (std::size_t i = 0; i < size; ++i) {
      a[i] = rng.unit() < 0.8;
      x[i] = rng.unit() < 0.5;
      any = any || a[i];
    }
    if (!any) continue;
    const double pa = event_probability(p, a);
    const auto cond = condition_on(p, a);
    const double eps = std::max(1 - pa, tv_distance(cond, uniform_dist(size)));
    EXPECT_LE(tv_distance(p, uniform_dist(size)), 2 * eps + 1e-12);
    EXPECT_LE(event_probability(cond, x), event_probability(p, x) / pa + 1e-12);
  }
}

TEST(Mixing, ConsistencyOnCliqueColoring) {
  const auto rep = gap_mixing_consistency(CliqueColoringSpec{2, 4}, {1.0 / 8});
  ASSERT_EQ(rep.rows.size(), 1U);
  EXPECT_TRUE(rep.rows[0].upper_ok);
  EXPECT_TRUE(rep.rows[0].lower_ok);
  EXPECT_FALSE(rep.violated);
}
