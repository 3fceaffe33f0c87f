#pragma once

// Bayes' theorem over a discrete set of hypotheses, in exact rationals, plus
// the equivalent "possible worlds" picture: imagine a number of equally
// likely worlds split between the hypotheses in proportion to the priors,
// delete the worlds in which the observed data would not have occurred, and
// count the survivors.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tentative/error.hpp"
#include "tentative/rational.hpp"

namespace tentative {

/// Tableaux with more worlds than this are refused (posteriors still work).
inline const BigInt kMaxWorlds = BigInt(1'000'000'000);

struct Hypothesis {
  std::string name;
  Rational prior;
  Rational likelihood;  // P(observed data | hypothesis)
};

/// Mutually exclusive, exhaustive hypotheses: priors sum to exactly 1.
class HypothesisSet {
 public:
  explicit HypothesisSet(std::vector<Hypothesis> hypotheses) : hypotheses_(std::move(hypotheses)) {
    if (hypotheses_.empty()) throw Error("need at least one hypothesis");
    Rational total = 0;
    for (const auto& h : hypotheses_) {
      if (h.prior < Rational(0) || h.prior > Rational(1))
        throw Error("prior of '" + h.name + "' is outside [0, 1]");
      if (h.likelihood < Rational(0) || h.likelihood > Rational(1))
        throw Error("likelihood of '" + h.name + "' is outside [0, 1]");
      total += h.prior;
    }
    if (total != Rational(1)) throw Error("priors sum to " + total.str() + ", not 1");
  }

  [[nodiscard]] const std::vector<Hypothesis>& hypotheses() const noexcept { return hypotheses_; }
  [[nodiscard]] std::size_t size() const noexcept { return hypotheses_.size(); }

  /// Sum of prior * likelihood: the probability of the observed data.
  [[nodiscard]] Rational evidence() const {
    Rational e = 0;
    for (const auto& h : hypotheses_) e += h.prior * h.likelihood;
    return e;
  }

 private:
  std::vector<Hypothesis> hypotheses_;
};

struct Posterior {
  std::string name;
  Rational probability;
};

inline std::vector<Posterior> posterior(const HypothesisSet& h) {
  const Rational evidence = h.evidence();
  if (evidence == Rational(0)) throw Error("the observed data is impossible under every hypothesis");
  std::vector<Posterior> out;
  out.reserve(h.size());
  for (const auto& hyp : h.hypotheses()) out.push_back({hyp.name, hyp.prior * hyp.likelihood / evidence});
  return out;
}

/// Posteriors become priors for the next round of evidence.
inline HypothesisSet sequential_update(const HypothesisSet& h, std::span<const Rational> new_likelihoods) {
  if (new_likelihoods.size() != h.size())
    throw Error("need one likelihood per hypothesis (" + std::to_string(h.size()) + ")");
  const auto post = posterior(h);
  std::vector<Hypothesis> next;
  next.reserve(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) next.push_back({post[i].name, post[i].probability, new_likelihoods[i]});
  return HypothesisSet(std::move(next));
}

struct WorldRow {
  std::string name;
  BigInt worlds;     // worlds / total = prior
  BigInt survivors;  // survivors / worlds = likelihood
};

struct WorldTableau {
  BigInt total_worlds;
  std::vector<WorldRow> rows;

  [[nodiscard]] BigInt surviving() const {
    BigInt s = 0;
    for (const auto& r : rows) s += r.survivors;
    return s;
  }

  /// Posterior recomputed by counting surviving worlds.
  [[nodiscard]] std::vector<Posterior> posterior() const {
    const BigInt s = surviving();
    if (s == 0) throw Error("no worlds survive");
    std::vector<Posterior> out;
    for (const auto& r : rows) out.push_back({r.name, Rational(r.survivors, s)});
    return out;
  }
};

/// Integer world counts for a hypothesis set. With `minimum`, the total is the
/// least common multiple of the prior and prior*likelihood denominators,
/// the smallest whole-world picture. Otherwise it is lcm(prior denominators)
/// times lcm(likelihood denominators), which keeps the likelihoods visible
/// as fractions of each hypothesis' worlds.
inline WorldTableau render_worlds(const HypothesisSet& h, bool minimum = true, const BigInt& max_worlds = kMaxWorlds) {
  if (h.evidence() == Rational(0)) throw Error("the observed data is impossible under every hypothesis");
  using boost::multiprecision::lcm;
  BigInt total = 1;
  if (minimum) {
    for (const auto& hyp : h.hypotheses()) {
      total = lcm(total, hyp.prior.denominator());
      total = lcm(total, (hyp.prior * hyp.likelihood).denominator());
    }
  } else {
    BigInt prior_den = 1, lik_den = 1;
    for (const auto& hyp : h.hypotheses()) {
      prior_den = lcm(prior_den, hyp.prior.denominator());
      lik_den = lcm(lik_den, hyp.likelihood.denominator());
    }
    total = prior_den * lik_den;
  }
  if (total > max_worlds) throw Error("tableau too large: " + total.str() + " worlds exceeds " + max_worlds.str());

  WorldTableau t;
  t.total_worlds = total;
  const Rational whole(total, 1);
  for (const auto& hyp : h.hypotheses()) {
    const Rational worlds = hyp.prior * whole;
    const Rational survivors = hyp.prior * hyp.likelihood * whole;
    t.rows.push_back({hyp.name, worlds.numerator(), survivors.numerator()});
  }
  return t;
}

/// Text picture of a tableau: one line per hypothesis with a check mark for
/// each surviving world and a cross for each deleted one. Rows longer than
/// `max_symbols` are summarized by counts only.
inline void write_world_grid(std::ostream& out, const WorldTableau& t, std::size_t max_symbols = 200) {
  out << "total worlds: " << t.total_worlds << '\n';
  std::size_t name_width = 0;
  for (const auto& r : t.rows) name_width = std::max(name_width, r.name.size());
  for (const auto& r : t.rows) {
    const BigInt deleted = r.worlds - r.survivors;
    out << r.name << std::string(name_width - r.name.size(), ' ') << "  " << r.worlds << " worlds, " << r.survivors
        << " ✓ survive, " << deleted << " × deleted";
    if (r.worlds <= max_symbols) {
      out << "\n  ";
      const auto keep = r.survivors.convert_to<std::size_t>();
      const auto drop = deleted.convert_to<std::size_t>();
      for (std::size_t i = 0; i < keep; ++i) out << "✓";
      for (std::size_t i = 0; i < drop; ++i) out << "×";
    }
    out << '\n';
  }
  out << "surviving worlds: " << t.surviving() << '\n';
}

/// Joint probabilities of two successive yes/no events (e.g. rain today,
/// rain tomorrow) built from P(first) and the two conditionals.
struct TwoStageOutcome {
  Rational both;
  Rational first_only;
  Rational second_only;
  Rational neither;

  [[nodiscard]] Rational second() const { return both + second_only; }
};

inline TwoStageOutcome two_stage_grid(const Rational& p_first, const Rational& p_second_given_first,
                                      const Rational& p_second_given_not_first) {
  for (const Rational* p : {&p_first, &p_second_given_first, &p_second_given_not_first})
    if (*p < Rational(0) || *p > Rational(1)) throw Error("probability " + p->str() + " is outside [0, 1]");
  const Rational not_first = Rational(1) - p_first;
  return {p_first * p_second_given_first, p_first * (Rational(1) - p_second_given_first),
          not_first * p_second_given_not_first, not_first * (Rational(1) - p_second_given_not_first)};
}

}  // namespace tentative
