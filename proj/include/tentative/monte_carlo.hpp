#pragma once

// Forward simulation with exact small-case answers: sequences of yes/no
// trials (coin tosses, children in a family) and opinion polls drawn from a
// finite electorate.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "tentative/data.hpp"
#include "tentative/error.hpp"
#include "tentative/parallel.hpp"
#include "tentative/random.hpp"
#include "tentative/rational.hpp"
#include "tentative/resampling.hpp"

namespace tentative {

/// C(n, k) p^k (1 - p)^(n - k), exactly.
inline Rational exact_binomial(unsigned n, unsigned k, const Rational& p) {
  if (k > n) throw Error("exact_binomial(): k exceeds n");
  if (p < Rational(0) || p > Rational(1)) throw Error("exact_binomial(): p outside [0, 1]");
  BigInt choose = 1;
  for (unsigned i = 1; i <= k; ++i) choose = choose * (n - k + i) / i;
  Rational result(choose, 1);
  const Rational q = Rational(1) - p;
  for (unsigned i = 0; i < k; ++i) result *= p;
  for (unsigned i = 0; i < n - k; ++i) result *= q;
  return result;
}

enum class CountEvent { exactly, at_least, at_most };

inline std::string_view to_string(CountEvent e) {
  switch (e) {
    case CountEvent::exactly: return "exactly";
    case CountEvent::at_least: return "at-least";
    case CountEvent::at_most: return "at-most";
  }
  return "?";
}

struct BernoulliExperiment {
  unsigned trials = 1;  // per run
  Rational success_probability{1, 2};
  CountEvent event = CountEvent::exactly;
  unsigned k = 0;

  [[nodiscard]] bool matches(unsigned successes) const {
    switch (event) {
      case CountEvent::exactly: return successes == k;
      case CountEvent::at_least: return successes >= k;
      case CountEvent::at_most: return successes <= k;
    }
    return false;
  }

  /// Exact probability of the event.
  [[nodiscard]] Rational exact() const {
    Rational total = 0;
    for (unsigned s = 0; s <= trials; ++s)
      if (matches(s)) total += exact_binomial(trials, s, success_probability);
    return total;
  }
};

struct BernoulliEstimate {
  std::size_t hits = 0;
  std::size_t runs = 0;
  std::uint64_t seed = 0;

  [[nodiscard]] double estimate() const noexcept {
    return runs == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(runs);
  }
};

/// Each run performs `trials` independent trials. A trial succeeds when a
/// uniform integer in [0, den) is below num, so rational probabilities with
/// 64-bit parts are simulated exactly; larger ones fall back to doubles.
inline BernoulliEstimate simulate_bernoulli(const BernoulliExperiment& e, const ReplicatePlan& plan) {
  if (e.trials < 1) throw Error("need at least one trial per run");
  if (plan.replicates < 1) throw Error("need at least one run");
  const Rational& p = e.success_probability;
  if (p < Rational(0) || p > Rational(1)) throw Error("success probability outside [0, 1]");

  const BigInt max64 = std::numeric_limits<std::uint64_t>::max();
  const bool exact = p.denominator() <= max64;
  const std::uint64_t num = exact ? p.numerator().convert_to<std::uint64_t>() : 0;
  const std::uint64_t den = exact ? p.denominator().convert_to<std::uint64_t>() : 1;
  const double approx = p.to_double();

  const auto hits = run_replicates(plan, [&](std::size_t, SeededGenerator& gen) -> std::uint8_t {
    unsigned successes = 0;
    for (unsigned t = 0; t < e.trials; ++t)
      successes += exact ? (gen.below(den) < num ? 1u : 0u) : (gen.uniform() < approx ? 1u : 0u);
    return e.matches(successes) ? 1 : 0;
  });
  BernoulliEstimate out;
  out.runs = hits.size();
  out.seed = plan.seed;
  for (auto h : hits) out.hits += h;
  return out;
}

struct PollResult {
  std::vector<double> proportions;  // one per poll, in poll order
  ResampleMode mode = ResampleMode::without_replacement;
  std::size_t sample_size = 0;
  std::uint64_t seed = 0;
  double min = 0;
  double max = 0;
  Interval interval;
};

/// Repeated opinion polls of `sample_size` electors each. Without
/// replacement the poll is the first k entries of a partial Fisher-Yates
/// shuffle; with replacement entries are drawn independently.
inline PollResult simulate_poll(const PopulationVector& pop, std::size_t sample_size, ResampleMode mode,
                                const ReplicatePlan& plan, double level = 0.95) {
  if (sample_size < 1) throw Error("poll size must be at least 1");
  if (mode == ResampleMode::without_replacement && sample_size > pop.size())
    throw Error("poll of " + std::to_string(sample_size) + " without replacement exceeds the population of " +
                std::to_string(pop.size()));
  if (plan.replicates < 1) throw Error("need at least one poll");

  const auto& entries = pop.entries();
  PollResult r;
  r.mode = mode;
  r.sample_size = sample_size;
  r.seed = plan.seed;
  r.proportions = run_replicates(plan, [&](std::size_t, SeededGenerator& gen) {
    std::size_t ones = 0;
    if (mode == ResampleMode::without_replacement) {
      std::vector<std::uint8_t> v = entries;
      partial_shuffle(gen, std::span<std::uint8_t>(v), sample_size);
      for (std::size_t i = 0; i < sample_size; ++i) ones += v[i];
    } else {
      for (std::size_t i = 0; i < sample_size; ++i) ones += entries[gen.below(entries.size())];
    }
    return static_cast<double>(ones) / static_cast<double>(sample_size);
  });
  const auto [lo, hi] = std::minmax_element(r.proportions.begin(), r.proportions.end());
  r.min = *lo;
  r.max = *hi;
  r.interval = r.proportions.size() >= 2 ? percentile_interval(r.proportions, level) : Interval{level, *lo, *hi};
  return r;
}

}  // namespace tentative
