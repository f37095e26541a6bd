#include <gtest/gtest.h>

#include "simperm/errors.hpp"
#include "simperm/flow.hpp"
#include "simperm/spectral.hpp"
#include "simperm/synthesis.hpp"

using namespace simperm;

TEST(Flow, SelfComparisonIsExactlyOne) {
  for (int k = 1; k <= 2; ++k) {
    const auto rep = self_comparison(SchreierSpec{3, k});
    EXPECT_EQ(rep.A_hat, 1.0);
    EXPECT_EQ(rep.max_load, 1.0);
    const auto b = comparison_bound(rep, 0.3);
    EXPECT_EQ(b.bound, 0.3);
    EXPECT_EQ(b.sigma, 0.0);
  }
}

TEST(Flow, RecolorPathsReplayWithFixedLength) {
  const auto rep = estimate_congestion(FlowKind::recolor, {4, 2}, 400, 9);
  EXPECT_EQ(rep.replay_failures, 0U);
  EXPECT_EQ(rep.loops + rep.paths, 400U);
  EXPECT_EQ(rep.min_length, three_cycle_length(4));
  EXPECT_EQ(rep.max_length, three_cycle_length(4));
  EXPECT_GT(rep.A_hat, 0.0);
  EXPECT_DOUBLE_EQ(rep.d, 16.0 * 4 * 3 * 2);
  EXPECT_DOUBLE_EQ(rep.d_tilde, 2.0 * 15);
}

TEST(Flow, CayleyPathsReplay) {
  const auto rep = estimate_congestion(FlowKind::cayley, {5, 2}, 200, 3);
  EXPECT_EQ(rep.replay_failures, 0U);
  EXPECT_EQ(rep.min_length, three_cycle_length(5));
}

TEST(Flow, GenericPathsReplayThroughGenericStates) {
  const auto rep = estimate_congestion(FlowKind::generic, {8, 3, 2}, 600, 4);
  EXPECT_EQ(rep.replay_failures, 0U);
  EXPECT_GT(rep.type1, 0U);
  EXPECT_GT(rep.type2, 0U);
  EXPECT_EQ(rep.loops + rep.type1 + rep.type2, 600U);
}

TEST(Flow, DeterministicAcrossThreads) {
  FlowOptions one, three;
  three.threads = 3;
  const auto a = estimate_congestion(FlowKind::recolor, {4, 2}, 300, 5, one);
  const auto b = estimate_congestion(FlowKind::recolor, {4, 2}, 300, 5, three);
  EXPECT_EQ(a.A_hat, b.A_hat);
  EXPECT_EQ(a.A_sigma, b.A_sigma);
  EXPECT_EQ(a.mean_load, b.mean_load);
  EXPECT_EQ(a.observed_edges, b.observed_edges);
}

TEST(Flow, ComparisonBoundPropagatesError) {
  CongestionReport rep;
  rep.A_hat = 4;
  rep.A_sigma = 1;
  const auto b = comparison_bound(rep, 0.5);
  EXPECT_DOUBLE_EQ(b.bound, 0.125);
  EXPECT_DOUBLE_EQ(b.sigma, 0.5 / 16);
  rep.A_hat = 0;
  EXPECT_THROW(comparison_bound(rep, 0.5), ContractError);
}

TEST(Flow, KindNames) {
  for (auto k : {FlowKind::cayley, FlowKind::recolor, FlowKind::generic}) EXPECT_EQ(flow_kind_from_string(to_string(k)), k);
  EXPECT_THROW(flow_kind_from_string("x"), ContractError);
}
