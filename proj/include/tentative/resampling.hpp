#pragma once

// Shuffle (permutation) tests and bootstrap confidence distributions.
//
// Conventions:
//  * p values count replicates at least as extreme as the observed value,
//    ties included. Two-sided means |T*| >= |T_obs|; it is never a doubled
//    one-sided value.
//  * Ties are decided with a relative tolerance of kTieTolerance, so that a
//    replicate reproducing the observed split counts even when its floating
//    point sum was accumulated in a different order.
//  * Percentiles interpolate linearly between order statistics: quantile q
//    sits at 0-based position q * (N - 1).
//  * Every replicate draws from substream(seed, replicate_index).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tentative/data.hpp"
#include "tentative/error.hpp"
#include "tentative/parallel.hpp"
#include "tentative/random.hpp"

namespace tentative {

inline constexpr double kTieTolerance = 1e-9;
inline constexpr double kSkewnessThreshold = 0.25;
inline constexpr std::size_t kSmallSample = 9;
inline constexpr std::size_t kMaxExactAssignments = 1'000'000;

enum class StatisticKind { mean, mean_difference, proportion_difference, pearson_correlation };
enum class Sidedness { two_sided, greater, less };
enum class ResampleMode { with_replacement, without_replacement };
enum class TailDirection { at_least, greater };

inline std::string_view to_string(StatisticKind k) {
  switch (k) {
    case StatisticKind::mean: return "mean";
    case StatisticKind::mean_difference: return "mean-diff";
    case StatisticKind::proportion_difference: return "prop-diff";
    case StatisticKind::pearson_correlation: return "pearson";
  }
  return "?";
}

inline std::string_view to_string(Sidedness s) {
  switch (s) {
    case Sidedness::two_sided: return "two-sided";
    case Sidedness::greater: return "greater";
    case Sidedness::less: return "less";
  }
  return "?";
}

inline std::string_view to_string(ResampleMode m) {
  return m == ResampleMode::with_replacement ? "with-replacement" : "without-replacement";
}

// ---------------------------------------------------------------------------
// Statistics

inline double mean_of(std::span<const double> v) {
  if (v.empty()) throw Error("mean of an empty list");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

/// Pearson correlation; throws when either coordinate has zero variance.
inline double pearson_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw Error("pearson correlation needs two equal-length columns");
  const double mx = mean_of(x);
  const double my = mean_of(y);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0 || syy == 0) throw Error("correlation undefined: a column has zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

namespace detail {

inline void require_two_group_statistic(StatisticKind k, const GroupedSample& g) {
  if (k != StatisticKind::mean_difference && k != StatisticKind::proportion_difference)
    throw Error("statistic '" + std::string(to_string(k)) + "' does not apply to grouped data");
  if (k == StatisticKind::proportion_difference)
    for (const auto& r : g.rows())
      if (r.value != 0 && r.value != 1) throw Error("prop-diff needs 0/1 values");
}

/// mean(v[0..n0)) - mean(v[n0..)).
inline double split_difference(std::span<const double> v, std::size_t n0) {
  double first = 0, second = 0;
  for (std::size_t i = 0; i < n0; ++i) first += v[i];
  for (std::size_t i = n0; i < v.size(); ++i) second += v[i];
  return first / static_cast<double>(n0) - second / static_cast<double>(v.size() - n0);
}

inline bool is_extreme(double t, double observed, Sidedness s) {
  const double tol = kTieTolerance * std::max(1.0, std::fabs(observed));
  switch (s) {
    case Sidedness::two_sided: return std::fabs(t) >= std::fabs(observed) - tol;
    case Sidedness::greater: return t >= observed - tol;
    case Sidedness::less: return t <= observed + tol;
  }
  return false;
}

/// C(n, k), or nullopt once it exceeds `cap`.
inline std::optional<std::uint64_t> bounded_binomial(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
  k = std::min(k, n - k);
  std::uint64_t c = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    c = c * (n - k + i) / i;  // exact: c * (n-k+i) is divisible by i at each step
    if (c > cap) return std::nullopt;
  }
  return c;
}

}  // namespace detail

/// Observed statistic of grouped data (group 0 minus group 1).
inline double evaluate(StatisticKind k, const GroupedSample& g) {
  detail::require_two_group_statistic(k, g);
  return g.difference();
}

// ---------------------------------------------------------------------------
// Histogram

/// Fixed-width bins whose centers are integer multiples of the width (so 0
/// is always a center). Value v lands in the bin with c - w/2 <= v < c + w/2.
class Histogram {
 public:
  Histogram(std::span<const double> values, double bin_width = 2.0) : width_(bin_width) {
    if (!(bin_width > 0) || !std::isfinite(bin_width)) throw Error("bin width must be positive");
    if (values.empty()) return;
    long long lo = std::numeric_limits<long long>::max();
    long long hi = std::numeric_limits<long long>::min();
    for (double v : values) {
      const long long b = bin_index(v);
      lo = std::min(lo, b);
      hi = std::max(hi, b);
    }
    first_ = lo;
    counts_.assign(static_cast<std::size_t>(hi - lo + 1), 0);
    for (double v : values) ++counts_[static_cast<std::size_t>(bin_index(v) - first_)];
    total_ = values.size();
  }

  [[nodiscard]] long long bin_index(double v) const { return static_cast<long long>(std::floor(v / width_ + 0.5)); }
  [[nodiscard]] double bin_width() const noexcept { return width_; }
  [[nodiscard]] std::size_t bins() const noexcept { return counts_.size(); }
  [[nodiscard]] double center(std::size_t i) const { return static_cast<double>(first_ + static_cast<long long>(i)) * width_; }
  [[nodiscard]] std::size_t count(std::size_t i) const { return counts_.at(i); }
  [[nodiscard]] const std::vector<std::size_t>& counts() const noexcept { return counts_; }
  [[nodiscard]] std::size_t total() const noexcept { return total_; }

  /// Count of the bin centered nearest to `center`; zero outside the range.
  [[nodiscard]] std::size_t count_at(double center) const {
    const long long b = bin_index(center);
    if (counts_.empty() || b < first_ || b >= first_ + static_cast<long long>(counts_.size())) return 0;
    return counts_[static_cast<std::size_t>(b - first_)];
  }

  void write_csv(std::ostream& out) const {
    out << "bin_center,count\n";
    for (std::size_t i = 0; i < counts_.size(); ++i) out << detail::format_real(center(i)) << ',' << counts_[i] << '\n';
  }

  void write_ascii(std::ostream& out, std::size_t max_bar = 50) const {
    const std::size_t peak = counts_.empty() ? 0 : *std::max_element(counts_.begin(), counts_.end());
    std::size_t label_width = 0;
    for (std::size_t i = 0; i < counts_.size(); ++i)
      label_width = std::max(label_width, detail::format_real(center(i)).size());
    for (std::size_t i = 0; i < counts_.size(); ++i) {
      const std::string label = detail::format_real(center(i));
      const std::size_t bar = peak == 0 ? 0 : (counts_[i] * max_bar + peak / 2) / peak;
      out << std::string(label_width - label.size(), ' ') << label << " | " << std::string(bar, '#')
          << (counts_[i] > 0 && bar == 0 ? "." : "") << ' ' << counts_[i] << '\n';
    }
  }

 private:
  double width_;
  long long first_ = 0;
  std::vector<std::size_t> counts_;
  std::size_t total_ = 0;
};

// ---------------------------------------------------------------------------
// Resample distributions

struct ResampleDistribution {
  StatisticKind statistic = StatisticKind::mean;
  ResampleMode mode = ResampleMode::with_replacement;
  double observed = 0;
  std::vector<double> values;
  std::uint64_t seed = 0;
  std::size_t sample_size = 0;
  std::size_t redraws = 0;  // degenerate bootstrap replicates that were drawn again

  [[nodiscard]] std::size_t replicates() const noexcept { return values.size(); }
  [[nodiscard]] Histogram histogram(double bin_width = 2.0) const { return Histogram(values, bin_width); }
};

struct TestReport {
  ResampleDistribution distribution;
  Sidedness sidedness = Sidedness::two_sided;
  std::size_t extreme_count = 0;
  double p_value = 1;

  [[nodiscard]] double observed() const noexcept { return distribution.observed; }
  [[nodiscard]] std::size_t replicates() const noexcept { return distribution.replicates(); }
  [[nodiscard]] std::uint64_t seed() const noexcept { return distribution.seed; }
};

namespace detail {
inline TestReport make_test_report(ResampleDistribution dist, Sidedness sides) {
  TestReport r;
  r.sidedness = sides;
  for (double t : dist.values)
    if (is_extreme(t, dist.observed, sides)) ++r.extreme_count;
  r.p_value = dist.values.empty() ? 1.0 : static_cast<double>(r.extreme_count) / static_cast<double>(dist.values.size());
  r.distribution = std::move(dist);
  return r;
}
}  // namespace detail

/// Shuffle test: each replicate shuffles all values and deals them back to
/// groups of the original sizes.
inline TestReport shuffle_test(const GroupedSample& data, StatisticKind stat, const ReplicatePlan& plan,
                               Sidedness sides = Sidedness::two_sided) {
  detail::require_two_group_statistic(stat, data);
  if (plan.replicates < 1) throw Error("need at least one replicate");
  const std::vector<double> pooled = data.values();
  const std::size_t n0 = data.count(0);

  ResampleDistribution dist;
  dist.statistic = stat;
  dist.mode = ResampleMode::without_replacement;
  dist.observed = data.difference();
  dist.seed = plan.seed;
  dist.sample_size = data.size();
  dist.values = run_replicates(plan, [&](std::size_t, SeededGenerator& gen) {
    std::vector<double> v = pooled;
    shuffle(gen, std::span<double>(v));
    return detail::split_difference(v, n0);
  });
  return detail::make_test_report(std::move(dist), sides);
}

/// Correlation shuffle test: the y column is shuffled against the fixed x column.
inline TestReport shuffle_test_paired(const PairedSample& data, const ReplicatePlan& plan,
                                      Sidedness sides = Sidedness::two_sided) {
  if (data.size() < 3) throw Error("correlation shuffle test needs at least 3 pairs");
  if (plan.replicates < 1) throw Error("need at least one replicate");
  ResampleDistribution dist;
  dist.statistic = StatisticKind::pearson_correlation;
  dist.mode = ResampleMode::without_replacement;
  dist.observed = pearson_correlation(data.x(), data.y());
  dist.seed = plan.seed;
  dist.sample_size = data.size();
  dist.values = run_replicates(plan, [&](std::size_t, SeededGenerator& gen) {
    std::vector<double> y = data.y();
    shuffle(gen, std::span<double>(y));
    return pearson_correlation(data.x(), y);
  });
  return detail::make_test_report(std::move(dist), sides);
}

struct ExactTestResult {
  double observed = 0;
  std::uint64_t extreme_count = 0;
  std::uint64_t assignments = 0;

  [[nodiscard]] double p_value() const noexcept {
    return static_cast<double>(extreme_count) / static_cast<double>(assignments);
  }
};

/// Exact shuffle-test p value over every way of choosing which rows form
/// group 0. Refuses instances with more than kMaxExactAssignments splits.
inline ExactTestResult enumerate_exact(const GroupedSample& data, StatisticKind stat,
                                       Sidedness sides = Sidedness::two_sided) {
  detail::require_two_group_statistic(stat, data);
  const std::size_t n = data.size();
  const std::size_t n0 = data.count(0);
  const auto total = detail::bounded_binomial(n, n0, kMaxExactAssignments);
  if (!total)
    throw Error("exact enumeration needs C(n, n1) <= " + std::to_string(kMaxExactAssignments) + " assignments");

  const std::vector<double> values = data.values();
  const double sum_all = std::accumulate(values.begin(), values.end(), 0.0);
  const auto n0d = static_cast<double>(n0);
  const auto n1d = static_cast<double>(n - n0);

  ExactTestResult out;
  out.observed = data.difference();
  out.assignments = *total;

  std::vector<std::size_t> idx(n0);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (;;) {
    double s = 0;
    for (std::size_t i : idx) s += values[i];
    const double diff = s / n0d - (sum_all - s) / n1d;
    if (detail::is_extreme(diff, out.observed, sides)) ++out.extreme_count;

    // next combination in lexicographic order
    std::size_t i = n0;
    while (i > 0 && idx[i - 1] == n - n0 + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < n0; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

/// Exact correlation shuffle test over all n! orderings of y (n <= 9).
inline ExactTestResult enumerate_exact_paired(const PairedSample& data, Sidedness sides = Sidedness::two_sided) {
  if (data.size() < 3) throw Error("correlation shuffle test needs at least 3 pairs");
  if (data.size() > 9) throw Error("exact correlation enumeration supports at most 9 pairs");
  ExactTestResult out;
  out.observed = pearson_correlation(data.x(), data.y());
  std::vector<std::size_t> perm(data.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::vector<double> y(data.size());
  do {
    for (std::size_t i = 0; i < perm.size(); ++i) y[i] = data.y()[perm[i]];
    if (detail::is_extreme(pearson_correlation(data.x(), y), out.observed, sides)) ++out.extreme_count;
    ++out.assignments;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

// ---------------------------------------------------------------------------
// Bootstrap

namespace detail {
inline constexpr std::size_t kMaxRedraws = 1'000'000;

template <typename Fn>
ResampleDistribution collect_bootstrap(ResampleDistribution dist, const ReplicatePlan& plan, Fn&& replicate) {
  if (plan.replicates < 1) throw Error("need at least one replicate");
  auto results = run_replicates(plan, replicate);
  dist.values.reserve(results.size());
  for (const auto& [value, redraws] : results) {
    dist.values.push_back(value);
    dist.redraws += redraws;
  }
  return dist;
}
}  // namespace detail

/// Bootstrap of the sample mean: each replicate draws n values with replacement.
inline ResampleDistribution bootstrap(const Sample& data, StatisticKind stat, const ReplicatePlan& plan) {
  if (stat != StatisticKind::mean)
    throw Error("statistic '" + std::string(to_string(stat)) + "' does not apply to a single sample");
  ResampleDistribution dist;
  dist.statistic = stat;
  dist.observed = data.mean();
  dist.seed = plan.seed;
  dist.sample_size = data.size();
  const auto& v = data.values();
  return detail::collect_bootstrap(std::move(dist), plan, [&](std::size_t, SeededGenerator& gen) {
    double s = 0;
    for (std::size_t i = 0; i < v.size(); ++i) s += v[gen.below(v.size())];
    return std::pair<double, std::size_t>{s / static_cast<double>(v.size()), 0};
  });
}

/// Bootstrap of a group difference: whole rows are drawn with replacement so
/// each value keeps its group. A replicate missing a group is drawn again.
inline ResampleDistribution bootstrap(const GroupedSample& data, StatisticKind stat, const ReplicatePlan& plan) {
  detail::require_two_group_statistic(stat, data);
  ResampleDistribution dist;
  dist.statistic = stat;
  dist.observed = data.difference();
  dist.seed = plan.seed;
  dist.sample_size = data.size();
  const auto& rows = data.rows();
  return detail::collect_bootstrap(std::move(dist), plan, [&](std::size_t, SeededGenerator& gen) {
    for (std::size_t attempt = 0; attempt < detail::kMaxRedraws; ++attempt) {
      double sum[2] = {0, 0};
      std::size_t count[2] = {0, 0};
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[gen.below(rows.size())];
        sum[r.group] += r.value;
        ++count[r.group];
      }
      if (count[0] > 0 && count[1] > 0)
        return std::pair<double, std::size_t>{sum[0] / static_cast<double>(count[0]) - sum[1] / static_cast<double>(count[1]),
                                              attempt};
    }
    throw Error("bootstrap kept drawing replicates with an empty group");
  });
}

/// Bootstrap of the correlation: whole pairs drawn with replacement;
/// replicates with zero variance in a coordinate are drawn again.
inline ResampleDistribution bootstrap(const PairedSample& data, StatisticKind stat, const ReplicatePlan& plan) {
  if (stat != StatisticKind::pearson_correlation) throw Error("paired data supports only the pearson statistic");
  ResampleDistribution dist;
  dist.statistic = stat;
  dist.observed = pearson_correlation(data.x(), data.y());
  dist.seed = plan.seed;
  dist.sample_size = data.size();
  return detail::collect_bootstrap(std::move(dist), plan, [&](std::size_t, SeededGenerator& gen) {
    const std::size_t n = data.size();
    std::vector<double> x(n), y(n);
    for (std::size_t attempt = 0; attempt < detail::kMaxRedraws; ++attempt) {
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = gen.below(n);
        x[i] = data.x()[j];
        y[i] = data.y()[j];
      }
      const bool flat_x = std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; });
      const bool flat_y = std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; });
      if (!flat_x && !flat_y) return std::pair<double, std::size_t>{pearson_correlation(x, y), attempt};
    }
    throw Error("bootstrap kept drawing replicates with zero variance");
  });
}

// ---------------------------------------------------------------------------
// Summaries

/// Quantile of already sorted values (linear interpolation at q * (N - 1)).
inline double sorted_percentile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw Error("percentile of an empty list");
  if (!(q >= 0 && q <= 1)) throw Error("percentile level outside [0, 1]");
  const double h = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

inline double percentile(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  return sorted_percentile(values, q);
}

struct Interval {
  double level = 0.95;
  double low = 0;
  double high = 0;
};

/// The (1-level)/2 and 1-(1-level)/2 percentiles of the values.
inline Interval percentile_interval(std::span<const double> values, double level = 0.95) {
  if (!(level > 0 && level < 1)) throw Error("interval level must lie strictly between 0 and 1");
  if (values.size() < 2) throw Error("percentile interval needs at least 2 values");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double tail = (1 - level) / 2;
  return {level, sorted_percentile(sorted, tail), sorted_percentile(sorted, 1 - tail)};
}

inline Interval percentile_interval(const ResampleDistribution& dist, double level = 0.95) {
  return percentile_interval(dist.values, level);
}

inline double tail_probability(std::span<const double> values, double threshold,
                               TailDirection direction = TailDirection::at_least) {
  if (values.empty()) return 0;
  std::size_t hits = 0;
  for (double v : values)
    if (direction == TailDirection::at_least ? v >= threshold : v > threshold) ++hits;
  return static_cast<double>(hits) / static_cast<double>(values.size());
}

inline double tail_probability(const ResampleDistribution& dist, double threshold,
                               TailDirection direction = TailDirection::at_least) {
  return tail_probability(dist.values, threshold, direction);
}

struct ScaleBounds {
  double min;
  double max;
};

/// Checks for the bootstrap reading of a resample histogram as a confidence
/// distribution: a roughly symmetric shape, no probability for parameter
/// values outside the measurement scale, and a usable sample size.
struct DiagnosticsReport {
  double mean = 0;
  double median = 0;
  double stdev = 0;
  double mean_median_gap = 0;  // |mean - median| / stdev
  double skewness = 0;         // third standardized moment
  double skewness_threshold = kSkewnessThreshold;
  bool asymmetric = false;  // |skewness| > threshold

  std::optional<ScaleBounds> bounds;
  double reflected_out_of_bounds = 0;  // fraction of values v with 2*observed - v outside bounds
  bool bound_violation = false;

  std::size_t sample_size = 0;
  bool small_sample = false;  // sample_size < kSmallSample
};

inline DiagnosticsReport diagnostics(const ResampleDistribution& dist, std::optional<ScaleBounds> bounds = std::nullopt,
                                     double skewness_threshold = kSkewnessThreshold) {
  DiagnosticsReport d;
  d.skewness_threshold = skewness_threshold;
  d.sample_size = dist.sample_size;
  d.small_sample = dist.sample_size < kSmallSample;
  d.bounds = bounds;
  if (dist.values.empty()) return d;

  const auto n = static_cast<double>(dist.values.size());
  d.mean = mean_of(dist.values);
  d.median = percentile(dist.values, 0.5);
  double m2 = 0, m3 = 0;
  for (double v : dist.values) {
    const double e = v - d.mean;
    m2 += e * e;
    m3 += e * e * e;
  }
  m2 /= n;
  m3 /= n;
  d.stdev = std::sqrt(m2);
  // Spread below rounding noise counts as a constant distribution.
  if (d.stdev > 1e-12 * std::max(1.0, std::fabs(d.mean))) {
    d.mean_median_gap = std::fabs(d.mean - d.median) / d.stdev;
    d.skewness = m3 / std::pow(m2, 1.5);
  }
  d.asymmetric = std::fabs(d.skewness) > skewness_threshold;

  if (bounds) {
    std::size_t outside = 0;
    for (double v : dist.values) {
      const double reflected = 2 * dist.observed - v;
      if (reflected < bounds->min || reflected > bounds->max) ++outside;
    }
    d.reflected_out_of_bounds = static_cast<double>(outside) / n;
    d.bound_violation = outside > 0;
  }
  return d;
}

struct TailQuery {
  double threshold;
  TailDirection direction = TailDirection::at_least;
};

struct TailProbability {
  TailQuery query;
  double probability;
};

struct BootstrapReport {
  ResampleDistribution distribution;
  Interval interval;
  std::vector<TailProbability> tails;
  DiagnosticsReport diagnostics;
  Histogram histogram;
};

struct SummaryOptions {
  double level = 0.95;
  std::vector<TailQuery> tails;
  std::optional<ScaleBounds> bounds;
  double bin_width = 2.0;
};

inline BootstrapReport summarize(ResampleDistribution dist, const SummaryOptions& opt = {}) {
  Interval interval = percentile_interval(dist, opt.level);
  std::vector<TailProbability> tails;
  for (const auto& q : opt.tails) tails.push_back({q, tail_probability(dist, q.threshold, q.direction)});
  DiagnosticsReport diag = diagnostics(dist, opt.bounds);
  Histogram hist = dist.histogram(opt.bin_width);
  return {std::move(dist), interval, std::move(tails), diag, std::move(hist)};
}

}  // namespace tentative
