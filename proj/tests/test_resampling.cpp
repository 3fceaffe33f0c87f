#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "oracles.hpp"
#include "tentative/data.hpp"
#include "tentative/resampling.hpp"

using namespace tentative;

namespace {
const GroupedSample& veg6() { return std::get<GroupedSample>(find_fixture("veg6").payload); }
const Sample& veg9() { return std::get<Sample>(find_fixture("veg9").payload); }
}  // namespace

TEST(ExactShuffle, Veg6MatchesBitmaskOracle) {
  const auto oracle_count = oracle::split_enumeration({74, 65, 57}, {69, 37, 26});
  EXPECT_EQ(oracle_count.total, 20u);
  EXPECT_EQ(oracle_count.extreme, 6u);
  const auto exact = enumerate_exact(veg6(), StatisticKind::mean_difference);
  EXPECT_EQ(exact.assignments, oracle_count.total);
  EXPECT_EQ(exact.extreme_count, oracle_count.extreme);
  EXPECT_NEAR(exact.observed, 64.0 / 3, 1e-12);
}

TEST(ExactShuffle, RandomIntegerDataMatchesOracle) {
  SeededGenerator gen(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n0 = 1 + gen.below(6);
    const std::size_t n1 = 1 + gen.below(6);
    std::vector<long long> a, b;
    std::vector<double> da, db;
    for (std::size_t i = 0; i < n0; ++i) a.push_back(static_cast<long long>(gen.below(8)));
    for (std::size_t i = 0; i < n1; ++i) b.push_back(static_cast<long long>(gen.below(8)));
    for (auto v : a) da.push_back(static_cast<double>(v));
    for (auto v : b) db.push_back(static_cast<double>(v));
    const auto o = oracle::split_enumeration(a, b);
    const auto e = enumerate_exact(GroupedSample::from_groups(da, db, {"a", "b"}), StatisticKind::mean_difference);
    EXPECT_EQ(e.assignments, o.total);
    EXPECT_EQ(e.extreme_count, o.extreme) << "trial " << trial;
  }
}

TEST(ShuffleTest, Veg6ConvergesToExact) {
  const auto r = shuffle_test(veg6(), StatisticKind::mean_difference, ReplicatePlan{100000, 0, 0});
  EXPECT_NEAR(r.p_value, 0.3, 0.01);
  EXPECT_EQ(r.replicates(), 100000u);
}

TEST(ShuffleTest, DegenerateInputsGivePOne) {
  const auto constant = GroupedSample::from_groups({5, 5, 5}, {5, 5}, {"a", "b"});
  EXPECT_DOUBLE_EQ(shuffle_test(constant, StatisticKind::mean_difference, ReplicatePlan{500, 1, 1}).p_value, 1.0);
  EXPECT_DOUBLE_EQ(enumerate_exact(constant, StatisticKind::mean_difference).p_value(), 1.0);

  const auto singletons = GroupedSample::from_groups({3}, {9}, {"a", "b"});
  EXPECT_DOUBLE_EQ(shuffle_test(singletons, StatisticKind::mean_difference, ReplicatePlan{500, 1, 1}).p_value, 1.0);
  EXPECT_DOUBLE_EQ(enumerate_exact(singletons, StatisticKind::mean_difference).p_value(), 1.0);
}

TEST(ShuffleTest, OneSidedTails) {
  const auto e = enumerate_exact(veg6(), StatisticKind::mean_difference, Sidedness::greater);
  // exactly 3 of the 20 splits give a difference >= 64/3 (by symmetry half of 6)
  EXPECT_EQ(e.extreme_count, 3u);
  const auto less = enumerate_exact(veg6(), StatisticKind::mean_difference, Sidedness::less);
  EXPECT_EQ(less.extreme_count, 18u);
}

TEST(ShuffleTest, RelabelingLeavesTwoSidedPUnchanged) {
  const ReplicatePlan plan{4000, 9, 1};
  const auto a = shuffle_test(veg6(), StatisticKind::mean_difference, plan);
  const auto b = shuffle_test(veg6().relabeled(), StatisticKind::mean_difference, plan);
  EXPECT_DOUBLE_EQ(a.observed(), -b.observed());
  EXPECT_EQ(enumerate_exact(veg6(), StatisticKind::mean_difference).extreme_count,
            enumerate_exact(veg6().relabeled(), StatisticKind::mean_difference).extreme_count);
  EXPECT_NEAR(a.p_value, b.p_value, 0.03);
}

TEST(ShuffleTest, ProportionDifferenceNeedsBinaryValues) {
  const auto g = GroupedSample::from_groups({1, 1, 0, 1}, {0, 0, 1, 0}, {"t", "c"});
  const auto e = enumerate_exact(g, StatisticKind::proportion_difference);
  EXPECT_DOUBLE_EQ(e.observed, 0.5);
  const auto bad = GroupedSample::from_groups({1, 2}, {0, 0}, {"t", "c"});
  EXPECT_THROW(enumerate_exact(bad, StatisticKind::proportion_difference), Error);
  EXPECT_THROW(shuffle_test(bad, StatisticKind::mean, ReplicatePlan{}), Error);
}

TEST(ShuffleTest, ExactRefusesHugeInstances) {
  std::vector<double> a(15, 1.0), b(15, 2.0);
  EXPECT_THROW(enumerate_exact(GroupedSample::from_groups(a, b, {"a", "b"}), StatisticKind::mean_difference), Error);
}

namespace {
// All n! index permutations of y, counted by an independent correlation routine.
oracle::Count permutation_oracle(const std::vector<double>& x, std::vector<double> y) {
  auto corr = [&](const std::vector<double>& yy) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sx += x[i];
      sy += yy[i];
      sxy += x[i] * yy[i];
      sxx += x[i] * x[i];
      syy += yy[i] * yy[i];
    }
    return (n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
  };
  const double obs = std::fabs(corr(y));
  std::vector<std::size_t> idx(y.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::vector<double> permuted(y.size());
  oracle::Count c;
  do {
    for (std::size_t i = 0; i < idx.size(); ++i) permuted[i] = y[idx[i]];
    ++c.total;
    if (std::fabs(corr(permuted)) >= obs - 1e-9) ++c.extreme;
  } while (std::next_permutation(idx.begin(), idx.end()));
  return c;
}
}  // namespace

TEST(PairedShuffle, PerfectCorrelationIsRare) {
  const PairedSample p({1, 2, 3, 4, 5}, {2, 4, 6, 8, 10});
  const auto o = permutation_oracle(p.x(), p.y());
  EXPECT_EQ(o.total, 120u);
  EXPECT_EQ(o.extreme, 2u);
  const auto e = enumerate_exact_paired(p);
  EXPECT_EQ(e.assignments, 120u);
  EXPECT_EQ(e.extreme_count, 2u);
  EXPECT_NEAR(shuffle_test_paired(p, ReplicatePlan{60000, 3, 0}).p_value, 2.0 / 120, 0.003);
}

TEST(PairedShuffle, MatchesPermutationOracleOnRandomData) {
  SeededGenerator gen(5);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> x, y;
    for (int i = 0; i < 6; ++i) {
      x.push_back(static_cast<double>(gen.below(100)));
      y.push_back(static_cast<double>(gen.below(100)));
    }
    const auto o = permutation_oracle(x, y);
    const auto e = enumerate_exact_paired(PairedSample(x, y));
    EXPECT_EQ(e.extreme_count, o.extreme) << trial;
  }
}

TEST(PairedShuffle, ZeroVarianceAndIndependence) {
  EXPECT_THROW(shuffle_test_paired(PairedSample({1, 2, 3}, {4, 4, 4}), ReplicatePlan{}), Error);
  SeededGenerator gen(8);
  std::vector<double> x, y;
  for (int i = 0; i < 40; ++i) {
    x.push_back(gen.uniform());
    y.push_back(gen.uniform());
  }
  EXPECT_GT(shuffle_test_paired(PairedSample(x, y), ReplicatePlan{5000, 0, 0}).p_value, 0.01);
}

TEST(Bootstrap, FirstReplicateFollowsDrawOrder) {
  // Indices [1,5,4,4,7,4,0,3,5] from substream(0, 0), transcribed independently.
  const auto d = bootstrap(veg9(), StatisticKind::mean, ReplicatePlan{1, 0, 1});
  ASSERT_EQ(d.values.size(), 1u);
  EXPECT_NEAR(d.values[0], 507.0 / 9, 1e-12);

  auto gen = substream(0, 0);
  const std::vector<std::size_t> expected{1, 5, 4, 4, 7, 4, 0, 3, 5};
  for (auto i : expected) EXPECT_EQ(gen.below(9), i);
}

TEST(Bootstrap, MeanOfReplicatesIsUnbiased) {
  const auto& s = veg9();
  double var = 0;
  for (double v : s.values()) var += (v - s.mean()) * (v - s.mean());
  var /= static_cast<double>(s.size());  // bootstrap variance uses the plug-in estimate
  constexpr std::size_t kN = 20000;
  const auto d = bootstrap(s, StatisticKind::mean, ReplicatePlan{kN, 13, 0});
  const double sd_of_mean = std::sqrt(var / static_cast<double>(s.size()));
  EXPECT_NEAR(mean_of(d.values), 60.0, 3 * sd_of_mean / std::sqrt(static_cast<double>(kN)));
  // replicate spread equals the plug-in standard error
  double m2 = 0;
  for (double v : d.values) m2 += (v - mean_of(d.values)) * (v - mean_of(d.values));
  EXPECT_NEAR(std::sqrt(m2 / kN), sd_of_mean, 0.03 * sd_of_mean);
}

TEST(Bootstrap, SerialAndParallelAreIdentical) {
  const auto a = bootstrap(veg9(), StatisticKind::mean, ReplicatePlan{3000, 42, 1});
  const auto b = bootstrap(veg9(), StatisticKind::mean, ReplicatePlan{3000, 42, 7});
  EXPECT_EQ(a.values, b.values);
  const auto ga = bootstrap(veg6(), StatisticKind::mean_difference, ReplicatePlan{3000, 42, 1});
  const auto gb = bootstrap(veg6(), StatisticKind::mean_difference, ReplicatePlan{3000, 42, 5});
  EXPECT_EQ(ga.values, gb.values);
  EXPECT_EQ(ga.redraws, gb.redraws);
}

TEST(Bootstrap, GroupedRedrawsEmptyGroups) {
  // with one row per group, a replicate misses a group half the time
  const auto g = GroupedSample::from_groups({10}, {4}, {"a", "b"});
  const auto d = bootstrap(g, StatisticKind::mean_difference, ReplicatePlan{2000, 0, 1});
  for (double v : d.values) EXPECT_DOUBLE_EQ(v, 6.0);
  EXPECT_GT(d.redraws, 1500u);
  EXPECT_LT(d.redraws, 2500u);
}

TEST(Bootstrap, StatisticMustFitData) {
  EXPECT_THROW(bootstrap(veg9(), StatisticKind::mean_difference, ReplicatePlan{}), Error);
  EXPECT_THROW(bootstrap(veg6(), StatisticKind::mean, ReplicatePlan{}), Error);
  EXPECT_THROW(bootstrap(veg9(), StatisticKind::mean, ReplicatePlan{0, 0, 1}), Error);
}

TEST(Percentile, LinearInterpolation) {
  std::vector<double> v(1000);
  std::iota(v.begin(), v.end(), 1.0);
  const auto i = percentile_interval(v, 0.95);
  // positions 0.025 * 999 = 24.975 and 0.975 * 999 = 974.025 (0-based)
  EXPECT_NEAR(i.low, 25.975, 1e-9);
  EXPECT_NEAR(i.high, 975.025, 1e-9);
  EXPECT_DOUBLE_EQ(percentile({3, 1, 2}, 0.5), 2.0);
  EXPECT_DOUBLE_EQ(percentile({7}, 0.3), 7.0);
  EXPECT_THROW(percentile({}, 0.5), Error);
}

TEST(TailProbability, Thresholds) {
  const std::vector<double> v{1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(tail_probability(v, 0), 1.0);
  EXPECT_DOUBLE_EQ(tail_probability(v, 5), 0.0);
  EXPECT_DOUBLE_EQ(tail_probability(v, 3), 0.5);
  EXPECT_DOUBLE_EQ(tail_probability(v, 3, TailDirection::greater), 0.25);
}

TEST(Histogram, CountsSumToReplicates) {
  const auto d = bootstrap(veg9(), StatisticKind::mean, ReplicatePlan{5000, 1, 0});
  const auto h = d.histogram(2.0);
  const auto total = std::accumulate(h.counts().begin(), h.counts().end(), std::size_t{0});
  EXPECT_EQ(total, 5000u);
  EXPECT_EQ(h.total(), 5000u);
  for (std::size_t i = 0; i < h.bins(); ++i) EXPECT_DOUBLE_EQ(std::fmod(h.center(i), 2.0), 0.0);

  std::ostringstream csv;
  h.write_csv(csv);
  EXPECT_EQ(csv.str().rfind("bin_center,count\n", 0), 0u);
}

TEST(Histogram, BinAssignment) {
  const std::vector<double> v{0.9, 1.1, 2.9, 3.1, -1.2};
  const Histogram h(v, 2.0);
  EXPECT_EQ(h.count_at(0), 1u);   // 0.9
  EXPECT_EQ(h.count_at(2), 2u);   // 1.1, 2.9
  EXPECT_EQ(h.count_at(4), 1u);   // 3.1
  EXPECT_EQ(h.count_at(-2), 1u);  // -1.2
}

TEST(Diagnostics, SymmetricShapeNotFlagged) {
  const auto d = bootstrap(veg9(), StatisticKind::mean, ReplicatePlan{10000, 0, 0});
  const auto diag = diagnostics(d, ScaleBounds{0, 100});
  EXPECT_FALSE(diag.asymmetric);
  EXPECT_FALSE(diag.small_sample);
  EXPECT_DOUBLE_EQ(diag.reflected_out_of_bounds, 0.0);
}

TEST(Diagnostics, SkewedSampleFlagged) {
  const auto& s = std::get<Sample>(find_fixture("skewed9").payload);
  const auto d = bootstrap(s, StatisticKind::mean, ReplicatePlan{10000, 0, 0});
  const auto diag = diagnostics(d, ScaleBounds{0, 100});
  EXPECT_TRUE(diag.asymmetric);
  EXPECT_LT(diag.skewness, 0);
  EXPECT_TRUE(diag.bound_violation);
  EXPECT_GT(diag.reflected_out_of_bounds, 0.0);
}

TEST(Diagnostics, ConstantAndSmallSamples) {
  const auto d = bootstrap(Sample({4, 4, 4}), StatisticKind::mean, ReplicatePlan{200, 0, 1});
  const auto diag = diagnostics(d);
  EXPECT_DOUBLE_EQ(diag.skewness, 0.0);
  EXPECT_FALSE(diag.asymmetric);
  EXPECT_TRUE(diag.small_sample);
  const auto i = percentile_interval(d);
  EXPECT_DOUBLE_EQ(i.low, 4.0);
  EXPECT_DOUBLE_EQ(i.high, 4.0);
}

TEST(Diagnostics, HandComputedSkewness) {
  // population moments of {0, 0, 3}: mean 1, m2 = 2, m3 = 2
  ResampleDistribution d;
  d.values = {0, 0, 3};
  d.sample_size = 20;
  const auto diag = diagnostics(d);
  EXPECT_NEAR(diag.skewness, 2.0 / std::pow(2.0, 1.5), 1e-12);
  EXPECT_DOUBLE_EQ(diag.median, 0.0);
}

TEST(Summarize, CollectsEverything) {
  SummaryOptions opt;
  opt.tails = {{50}, {70, TailDirection::greater}};
  opt.bounds = ScaleBounds{0, 100};
  const auto r = summarize(bootstrap(veg9(), StatisticKind::mean, ReplicatePlan{1000, 0, 1}), opt);
  ASSERT_EQ(r.tails.size(), 2u);
  EXPECT_GT(r.tails[0].probability, 0.9);
  EXPECT_LT(r.interval.low, 60);
  EXPECT_GT(r.interval.high, 60);
  EXPECT_EQ(r.histogram.total(), 1000u);
}
