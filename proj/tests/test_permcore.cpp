#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "oracle.hpp"
#include "simperm/cube.hpp"
#include "simperm/errors.hpp"
#include "simperm/tuple_matrix.hpp"
#include "simperm/word_io.hpp"

using namespace simperm;

TEST(CubePoint, BitsStringRoundTrip) {
  const auto p = CubePoint::from_bits_string("1101");
  EXPECT_EQ(p.dim(), 4);
  EXPECT_EQ(p.bits(), 0b1011U);
  EXPECT_EQ(p.to_bits_string(), "1101");
  EXPECT_EQ(CubePoint::from_hex(4, p.to_hex()), p);
  EXPECT_EQ(p.flipped(2).to_bits_string(), "1111");
  EXPECT_THROW(CubePoint(3, 8), ContractError);
}

TEST(CubePoint, Hamming) {
  EXPECT_EQ(hamming_distance(CubePoint(6, 0b101010), CubePoint(6, 0b010101)), 6);
  EXPECT_EQ(hamming_distance(CubePoint(6, 7), CubePoint(6, 7)), 0);
}

TEST(SimplePerm, MatchesOracleOnEveryInput) {
  SeedStream rng(11);
  const int n = 6;
  for (int rep = 0; rep < 200; ++rep) {
    const auto g = sample_sigma(SigmaSpec{n, 3}, rng);
    for (std::uint64_t v = 0; v < (1ULL << n); ++v) {
      const auto want = oracle::from_vec(oracle::eval(oracle::to_vec(v, n), g.target(), g.controls(), g.table()));
      ASSERT_EQ(g.apply_bits(v), want);
    }
  }
}

TEST(SimplePerm, EveryGeneratorIsAnInvolution) {
  for (const auto& g : enumerate_sigma(SigmaSpec{4, 2})) {
    for (std::uint64_t v = 0; v < 16; ++v) ASSERT_EQ(g.apply_bits(g.apply_bits(v)), v);
  }
}

TEST(SimplePerm, RejectsBadIndices) {
  EXPECT_THROW(SimplePerm(0, {0, 1}, 1), ContractError);
  EXPECT_THROW(SimplePerm(0, {1, 1}, 1), ContractError);
  EXPECT_THROW(SimplePerm(0, {1}, 0x10), ContractError);
}

TEST(SimplePerm, PaddingPreservesAction) {
  SeedStream rng(3);
  const std::vector<int> cand{0, 1, 2, 3, 4, 5};
  for (int rep = 0; rep < 50; ++rep) {
    const auto g = sample_sigma(SigmaSpec{6, 1}, rng);
    const auto p = pad_to_width(g, 2, cand);
    EXPECT_EQ(p.width(), 2);
    for (std::uint64_t v = 0; v < 64; ++v) ASSERT_EQ(p.apply_bits(v), g.apply_bits(v));
  }
}

TEST(SigmaSpec, CensusCountsOrderedTuples) {
  for (int n = 3; n <= 6; ++n) {
    const SigmaSpec s{n, 2};
    EXPECT_EQ(s.count(), 16 * oracle::falling(static_cast<std::uint64_t>(n), 3));
    const auto all = enumerate_sigma(s);
    ASSERT_EQ(all.size(), s.count());
    std::set<std::tuple<int, int, int, std::uint64_t>> seen;
    for (const auto& g : all) seen.insert({g.target(), g.control(0), g.control(1), g.table()});
    EXPECT_EQ(seen.size(), all.size());
  }
}

TEST(SigmaSpec, RankUnrankRoundTrip) {
  const SigmaSpec s{5, 2};
  const auto all = enumerate_sigma(s);
  for (std::uint64_t r = 0; r < all.size(); ++r) {
    ASSERT_EQ(sigma_rank(s, all[r]), r);
    ASSERT_EQ(sigma_unrank(s, r), all[r]);
  }
}

TEST(SigmaSpec, SamplingIsRoughlyUniformOverTargets) {
  SeedStream rng(5);
  std::vector<int> hits(5);
  for (int i = 0; i < 50000; ++i) ++hits[static_cast<std::size_t>(sample_sigma(SigmaSpec{5, 2}, rng).target())];
  for (int h : hits) EXPECT_NEAR(h, 10000, 500);
}

TEST(Word, TableAndSignMatchOracle) {
  SeedStream rng(9);
  const int n = 5;
  for (int rep = 0; rep < 20; ++rep) {
    Word w;
    for (int i = 0; i < 7; ++i) w.push(sample_sigma(SigmaSpec{n, 2}, rng));
    const auto t = word_to_table(w, n);
    const auto o = oracle::word_table(w, n);
    ASSERT_EQ(std::vector<std::uint64_t>(t.begin(), t.end()), o);
    EXPECT_EQ(word_sign(w, n), oracle::sign_by_inversions(o));
    const auto back = word_to_table(w.reversed(), n);
    for (std::uint64_t v = 0; v < t.size(); ++v) ASSERT_EQ(back[t[v]], v);
  }
}

TEST(Word, TranspositionIsOdd) {
  std::vector<std::uint32_t> t = identity_table(3);
  std::swap(t[1], t[6]);
  EXPECT_EQ(table_sign(t), -1);
  EXPECT_EQ(table_sign(identity_table(4)), 1);
}

TEST(Word, SpansSurviveAppendAndLabel) {
  Word a;
  a.push(SimplePerm(0, {1, 2}, 8));
  a.label_tail(0, "x");
  Word b;
  b.push(SimplePerm(1, {0, 2}, 8));
  b.push(SimplePerm(2, {0, 1}, 8));
  b.label_tail(0, "y");
  a.append(b);
  EXPECT_EQ(a.size(), 3U);
  EXPECT_EQ(a.label_at(0), "x");
  EXPECT_EQ(a.label_at(2), "y");
}

TEST(WordIo, RoundTrip) {
  SeedStream rng(1);
  Word w;
  for (int i = 0; i < 5; ++i) w.push(sample_sigma(SigmaSpec{7, 2}, rng));
  w.label_tail(0, "head");
  w.push(SimplePerm(3, std::vector<int>{}, 1));
  const auto text = format_word(w);
  const auto back = parse_word(text);
  EXPECT_EQ(back.gens(), w.gens());
  EXPECT_EQ(back.label_at(1), "head");
  std::istringstream is("# comment\n\n0; 1,2; 8\n");
  EXPECT_EQ(read_word(is).size(), 1U);
  EXPECT_THROW(parse_word("0; 1,2\n"), ContractError);
}

TEST(TupleMatrix, KeyRoundTripAndDistinctness) {
  const TupleMatrix m(4, {3, 7, 12});
  EXPECT_EQ(TupleMatrix::from_key(4, 3, m.key()), m);
  EXPECT_THROW(TupleMatrix(4, {3, 3}), ContractError);
  const std::vector<int> cols{0, 1};
  EXPECT_EQ(m.restrict_row(1, cols), 3U);
  EXPECT_FALSE(m.rows_distinct_on(cols));
  EXPECT_EQ(m.with_bit_flipped(0, 3).row(0), 11U);
}

TEST(TupleMatrix, WordActsRowwise) {
  SeedStream rng(2);
  Word w;
  for (int i = 0; i < 6; ++i) w.push(sample_sigma(SigmaSpec{5, 2}, rng));
  const TupleMatrix m(5, {1, 17, 30});
  const auto out = apply_word_tuple(w, m);
  for (int r = 0; r < 3; ++r) EXPECT_EQ(out.row(r), w.apply_bits(m.row(r)));
}
