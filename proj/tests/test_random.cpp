#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <map>
#include <vector>

#include "tentative/parallel.hpp"
#include "tentative/random.hpp"

using namespace tentative;

// Frozen from an independent Python transcription of the documented
// xoshiro256** / SplitMix64 recipe.
TEST(SeededGenerator, MatchesDocumentedRecurrence) {
  SeededGenerator g0(0);
  EXPECT_EQ(g0(), 0x99ec5f36cb75f2b4ULL);
  EXPECT_EQ(g0(), 0xbf6e1f784956452aULL);
  EXPECT_EQ(g0(), 0x1a5f849d4933e6e0ULL);
  EXPECT_EQ(g0(), 0x6aa594f1262d2d2cULL);

  SeededGenerator g42(42);
  EXPECT_EQ(g42(), 0x15780b2e0c2ec716ULL);
  EXPECT_EQ(g42(), 0x6104d9866d113a7eULL);
}

TEST(SeededGenerator, SubstreamsMatchDocumentedMixing) {
  auto s0 = substream(0, 0);
  EXPECT_EQ(s0(), 0x6d07c1b1feb84c00ULL);
  EXPECT_EQ(s0(), 0xc72d8dfa17b344c9ULL);
  auto s1 = substream(0, 1);
  EXPECT_EQ(s1(), 0xce2460062092d294ULL);
  auto s73 = substream(7, 3);
  EXPECT_EQ(s73(), 0xde528827c2b7a44eULL);
  EXPECT_EQ(s73(), 0x8fc8402293f12015ULL);
}

TEST(SeededGenerator, SubstreamIsDeterministicAndStateless) {
  auto a = substream(123, 9);
  for (int i = 0; i < 50; ++i) {
    auto other = substream(123, static_cast<std::uint64_t>(i));
    (void)other();
  }
  auto b = substream(123, 9);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
}

TEST(SeededGenerator, DistinctIndicesGiveDistinctStreams) {
  auto a = substream(5, 0);
  auto b = substream(5, 1);
  for (int i = 0; i < 4; ++i) EXPECT_NE(a(), b());
  std::vector<std::uint64_t> firsts;
  for (std::uint64_t i = 0; i < 2000; ++i) firsts.push_back(substream(5, i)());
  std::sort(firsts.begin(), firsts.end());
  EXPECT_EQ(std::adjacent_find(firsts.begin(), firsts.end()), firsts.end());
}

TEST(SeededGenerator, BelowStaysInRangeAndRejectsZero) {
  SeededGenerator g(3);
  for (std::uint64_t bound : {1ULL, 2ULL, 3ULL, 7ULL, 1000ULL, (1ULL << 63) + 1})
    for (int i = 0; i < 200; ++i) EXPECT_LT(g.below(bound), bound);
  EXPECT_THROW(g.below(0), Error);
  for (int i = 0; i < 1000; ++i) {
    const double u = g.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(Shuffle, EdgeCases) {
  SeededGenerator g(1);
  std::vector<int> empty;
  shuffle(g, std::span<int>(empty));
  EXPECT_TRUE(empty.empty());
  EXPECT_EQ(shuffled(g, std::vector<int>{42}), std::vector<int>{42});
}

TEST(Shuffle, PreservesMultiset) {
  SeededGenerator g(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<int> v;
    const auto n = g.below(30);
    for (std::uint64_t i = 0; i < n; ++i) v.push_back(static_cast<int>(g.below(5)));
    auto s = shuffled(g, v);
    std::sort(v.begin(), v.end());
    std::sort(s.begin(), s.end());
    EXPECT_EQ(v, s);
  }
}

TEST(Shuffle, AllSixOrdersEquallyLikely) {
  SeededGenerator g(0);
  std::map<std::array<int, 3>, int> counts;
  constexpr int kTrials = 20000;
  for (int i = 0; i < kTrials; ++i) {
    std::array<int, 3> a{1, 2, 3};
    shuffle(g, std::span<int>(a));
    ++counts[a];
  }
  ASSERT_EQ(counts.size(), 6u);
  const double expected = kTrials / 6.0;
  double chi2 = 0;
  for (const auto& [order, c] : counts) {
    EXPECT_NEAR(c / double(kTrials), 1.0 / 6, 0.02);
    chi2 += (c - expected) * (c - expected) / expected;
  }
  EXPECT_LT(chi2, 20.52);  // chi-square, 5 df, upper 0.1% point
}

TEST(DrawWithReplacement, SingletonAndEmpty) {
  SeededGenerator g(2);
  EXPECT_EQ(draw_with_replacement(g, std::vector<int>{7}, 5), std::vector<int>(5, 7));
  EXPECT_THROW((void)draw_with_replacement(g, std::vector<int>{}, 3), Error);
}

TEST(DrawWithReplacement, FrequenciesAreUniform) {
  SeededGenerator g(0);
  const std::vector<int> items{0, 1, 2, 3, 4, 5, 6, 7, 8};
  std::array<int, 9> counts{};
  constexpr int kDraws = 90000;
  for (int v : draw_with_replacement(g, items, kDraws)) ++counts[static_cast<std::size_t>(v)];
  for (int c : counts) EXPECT_NEAR(c / double(kDraws), 1.0 / 9, 0.01);
}

TEST(DrawWithReplacement, RepeatsHappen) {
  SeededGenerator g(0);
  const std::vector<int> veg9{74, 65, 57, 78, 54, 47, 38, 34, 93};
  bool saw_repeat = false;
  for (int r = 0; r < 20 && !saw_repeat; ++r) {
    auto d = draw_with_replacement(g, veg9, 9);
    std::sort(d.begin(), d.end());
    saw_repeat = std::adjacent_find(d.begin(), d.end()) != d.end();
  }
  EXPECT_TRUE(saw_repeat);
}

TEST(PartialShuffle, PrefixIsASubset) {
  SeededGenerator g(4);
  std::vector<int> v{1, 2, 3, 4, 5, 6, 7, 8};
  partial_shuffle(g, std::span<int>(v), 3);
  auto sorted = v;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(sorted, (std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8}));
  EXPECT_THROW(partial_shuffle(g, std::span<int>(v), 9), Error);
}

TEST(RunReplicates, SerialAndParallelAgree) {
  auto fn = [](std::size_t i, SeededGenerator& gen) { return static_cast<double>(gen() % 1000) + static_cast<double>(i); };
  const auto serial = run_replicates(ReplicatePlan{5000, 77, 1}, fn);
  const auto parallel = run_replicates(ReplicatePlan{5000, 77, 8}, fn);
  const auto all_cores = run_replicates(ReplicatePlan{5000, 77, 0}, fn);
  EXPECT_EQ(serial, parallel);
  EXPECT_EQ(serial, all_cores);
}

TEST(RunReplicates, PropagatesExceptions) {
  auto fn = [](std::size_t i, SeededGenerator&) -> double {
    if (i == 3000) throw Error("boom");
    return 0;
  };
  EXPECT_THROW(run_replicates(ReplicatePlan{4000, 0, 4}, fn), Error);
}
