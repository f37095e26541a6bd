#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "simperm/errors.hpp"
#include "simperm/spectral.hpp"

using namespace simperm;

namespace {

// Character oracle for Schreier(n, 1): eigenvalue (n - |S|)/n with
// multiplicity C(n, |S|).
std::vector<double> k1_oracle(int n) {
  std::vector<double> out;
  for (int s = 0; s <= n; ++s) {
    double c = 1;
    for (int i = 0; i < s; ++i) c = c * (n - i) / (i + 1);
    for (int r = 0; r < static_cast<int>(std::lround(c)); ++r) out.push_back(static_cast<double>(n - s) / n);
  }
  return out;
}

}  // namespace

TEST(Spectral, TwoStateChain) {
  const auto m = TransitionMatrix::from_dense({0.7, 0.3, 0.3, 0.7}, 2);
  const auto s = eig_symmetric(m);
  ASSERT_EQ(s.eigenvalues.size(), 2U);
  EXPECT_NEAR(s.eigenvalues[0], 1.0, 1e-12);
  EXPECT_NEAR(s.eigenvalues[1], 0.4, 1e-12);
  EXPECT_NEAR(s.gap, 0.6, 1e-12);
  EXPECT_LT(s.max_residual, 1e-12);
}

TEST(Spectral, RejectsAsymmetric) {
  EXPECT_THROW(eig_symmetric(TransitionMatrix::from_dense({0.5, 0.5, 0.2, 0.8}, 2)), ContractError);
}

TEST(Spectral, CsrMergesDuplicates) {
  const TransitionMatrix m({10, 20}, {0, 3, 4}, {1, 0, 1, 1}, {0.25, 0.5, 0.25, 1.0});
  EXPECT_EQ(m.nonzeros(), 3U);
  EXPECT_DOUBLE_EQ(m.at(0, 1), 0.5);
  EXPECT_EQ(m.index_of(20), 1U);
  EXPECT_THROW(m.index_of(30), ContractError);
}

TEST(Spectral, SchreierK1MatchesCharacterFormula) {
  for (int n = 3; n <= 6; ++n) {
    const auto s = eig_symmetric(transition_matrix(SchreierSpec{n, 1}));
    auto want = k1_oracle(n);
    std::sort(want.rbegin(), want.rend());
    ASSERT_EQ(s.eigenvalues.size(), want.size());
    for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(s.eigenvalues[i], want[i], 1e-9);
    EXPECT_NEAR(s.gap, 1.0 / n, 1e-9);
    const auto formula = schreier_k1_spectrum(n);
    ASSERT_EQ(formula.size(), want.size());
    for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(formula[i], want[i], 1e-15);
    EXPECT_LT(s.max_residual, 1e-9);
  }
}

TEST(Spectral, LiftContainment) {
  const auto r = lift_check(SchreierSpec{3, 1}, SchreierSpec{3, 2}, 1e-8);
  EXPECT_TRUE(r.contained);
  EXPECT_EQ(r.small_size, 8U);
  EXPECT_EQ(r.big_size, 56U);
}

TEST(Spectral, MultisetContainment) {
  EXPECT_TRUE(multiset_contained({1, 0.5}, {1, 0.5, 0.5, 0.2}, 1e-12).contained);
  EXPECT_FALSE(multiset_contained({1, 0.5, 0.5}, {1, 0.5, 0.2}, 1e-12).contained);
}

TEST(Spectral, ProductIdentity) {
  const ProductGlauberSpec s{2, 2, 2, 1};
  const double g = spectral_gap(s);
  const double g1 = spectral_gap(CliqueColoringSpec{2, 4});
  const double g2 = spectral_gap(LazyHypercubeSpec{2});
  EXPECT_NEAR(g, std::min(g1 / s.p, g2) / 2, 1e-9);
}
