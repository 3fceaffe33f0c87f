#pragma once

// Tentative probabilities from published confidence intervals and p values.
//
// A reported 95% interval (or a p value plus point estimate) is turned into
// a normal or Student t location/scale model for the unknown parameter:
//
//   from an interval:  center = (low + high) / 2
//                      se     = (high - low) / (2 q),  q = Q((1 + level) / 2)
//   from a p value:    center = estimate
//                      se     = |estimate - null| / q, q = Q(1 - p / 2)
//
// where Q is the normal or t quantile. Ratios (odds, risk) are calibrated on
// the raw scale by default. Scale::log calibrates on log(ratio) instead, which
// is usually the better statistical model for ratios.

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include "tentative/data.hpp"
#include "tentative/distributions.hpp"
#include "tentative/error.hpp"

namespace tentative {

inline constexpr double kAsymmetryThreshold = 0.25;

class DistributionFamily {
 public:
  static DistributionFamily normal() { return DistributionFamily(0); }
  static DistributionFamily student_t(int df) {
    if (df < 1) throw Error("student t needs a positive number of degrees of freedom");
    return DistributionFamily(df);
  }

  [[nodiscard]] bool is_normal() const noexcept { return df_ == 0; }
  [[nodiscard]] int df() const noexcept { return df_; }

  [[nodiscard]] double cdf(double z) const { return is_normal() ? normal_cdf(z) : t_cdf(z, df_); }
  [[nodiscard]] double quantile(double p) const { return is_normal() ? normal_quantile(p) : t_quantile(p, df_); }

  [[nodiscard]] std::string name() const { return is_normal() ? "normal" : "t(df=" + std::to_string(df_) + ")"; }

  friend bool operator==(const DistributionFamily&, const DistributionFamily&) = default;

 private:
  explicit DistributionFamily(int df) : df_(df) {}
  int df_;  // 0 means normal
};

enum class CalibrationSource { from_interval, from_p_value };
enum class Scale { raw, log };

class CalibratedDistribution {
 public:
  CalibratedDistribution(double center, double se, DistributionFamily family, CalibrationSource source,
                         Scale scale = Scale::raw)
      : center_(center), se_(se), family_(family), source_(source), scale_(scale) {
    if (!(se > 0) || !std::isfinite(se)) throw Error("calibrated scale must be positive");
    if (!std::isfinite(center)) throw Error("calibrated center must be finite");
  }

  /// Location and scale; on the log scale these refer to log(theta).
  [[nodiscard]] double center() const noexcept { return center_; }
  [[nodiscard]] double se() const noexcept { return se_; }
  [[nodiscard]] const DistributionFamily& family() const noexcept { return family_; }
  [[nodiscard]] CalibrationSource source() const noexcept { return source_; }
  [[nodiscard]] Scale scale() const noexcept { return scale_; }

  /// P(theta < x).
  [[nodiscard]] double cdf(double x) const {
    if (scale_ == Scale::log) {
      if (x <= 0) return 0;
      x = std::log(x);
    }
    return family_.cdf((x - center_) / se_);
  }

  /// P(theta > x).
  [[nodiscard]] double sf(double x) const {
    if (scale_ == Scale::log) {
      if (x <= 0) return 1;
      x = std::log(x);
    }
    return family_.cdf((center_ - x) / se_);
  }

 private:
  double center_;
  double se_;
  DistributionFamily family_;
  CalibrationSource source_;
  Scale scale_;
};

namespace detail {
inline double to_scale(double v, Scale s, std::string_view what) {
  if (s == Scale::raw) return v;
  if (!(v > 0)) throw Error(std::string(what) + " must be positive on the log scale");
  return std::log(v);
}
}  // namespace detail

inline CalibratedDistribution calibrate_from_interval(double low, double high, double level = 0.95,
                                                      DistributionFamily family = DistributionFamily::normal(),
                                                      Scale scale = Scale::raw) {
  if (!(low < high)) throw Error("interval needs low < high");
  if (!(level > 0 && level < 1)) throw Error("interval level must lie strictly between 0 and 1");
  const double lo = detail::to_scale(low, scale, "interval limit");
  const double hi = detail::to_scale(high, scale, "interval limit");
  const double q = family.quantile((1 + level) / 2);
  return CalibratedDistribution((lo + hi) / 2, (hi - lo) / (2 * q), family, CalibrationSource::from_interval, scale);
}

/// `p` is two-sided; `null_value` is the baseline (0 for differences, 1 for ratios).
inline CalibratedDistribution calibrate_from_p(double estimate, double p, double null_value,
                                               DistributionFamily family = DistributionFamily::normal(),
                                               Scale scale = Scale::raw) {
  if (!(p > 0 && p < 1)) throw Error("p value must lie strictly between 0 and 1");
  if (estimate == null_value) throw Error("estimate equals the null value: the scale is undefined");
  const double est = detail::to_scale(estimate, scale, "estimate");
  const double null = detail::to_scale(null_value, scale, "null value");
  const double q = family.quantile(1 - p / 2);
  return CalibratedDistribution(est, std::fabs(est - null) / q, family, CalibrationSource::from_p_value, scale);
}

struct Event {
  enum class Kind { greater, less, between, outside };
  Kind kind;
  double a;
  double b = 0;

  static Event greater_than(double x) { return {Kind::greater, x}; }
  static Event less_than(double x) { return {Kind::less, x}; }
  static Event between(double lo, double hi) { return checked({Kind::between, lo, hi}); }
  static Event outside(double lo, double hi) { return checked({Kind::outside, lo, hi}); }

  /// "gt X", "lt X", "between X1,X2", "outside X1,X2".
  static Event parse(std::string_view text) {
    const auto space = text.find(' ');
    if (space == std::string_view::npos) throw Error("query must look like 'gt X' or 'between X1,X2'");
    const std::string_view op = text.substr(0, space);
    const std::string_view args = csv::trim(text.substr(space + 1));
    auto number = [&](std::string_view s) {
      auto v = csv::parse_number(s);
      if (!v) throw Error("cannot parse '" + std::string(s) + "' in query");
      return *v;
    };
    if (op == "gt") return greater_than(number(args));
    if (op == "lt") return less_than(number(args));
    const auto comma = args.find(',');
    if ((op == "between" || op == "outside") && comma != std::string_view::npos) {
      const double lo = number(args.substr(0, comma));
      const double hi = number(args.substr(comma + 1));
      return op == "between" ? between(lo, hi) : outside(lo, hi);
    }
    throw Error("unknown query '" + std::string(text) + "'");
  }

  [[nodiscard]] std::string describe() const {
    std::ostringstream s;
    switch (kind) {
      case Kind::greater: s << "theta > " << a; break;
      case Kind::less: s << "theta < " << a; break;
      case Kind::between: s << a << " < theta < " << b; break;
      case Kind::outside: s << "theta < " << a << " or theta > " << b; break;
    }
    return s.str();
  }

 private:
  static Event checked(Event e) {
    if (!(e.a < e.b)) throw Error("interval query needs x1 < x2");
    return e;
  }
};

inline double probability(const CalibratedDistribution& dist, const Event& e) {
  switch (e.kind) {
    case Event::Kind::greater: return dist.sf(e.a);
    case Event::Kind::less: return dist.cdf(e.a);
    case Event::Kind::between: return dist.cdf(e.b) - dist.cdf(e.a);
    case Event::Kind::outside: return dist.cdf(e.a) + dist.sf(e.b);
  }
  return 0;
}

/// When an interval and a point estimate are both reported, a midpoint far
/// from the estimate means the sampling distribution is not symmetric and
/// the calibrated probabilities are unreliable. Returns a warning when
/// |midpoint - estimate| > threshold * se.
inline std::optional<std::string> asymmetry_warning(const CalibratedDistribution& from_interval, double estimate,
                                                    double threshold = kAsymmetryThreshold) {
  const double est = from_interval.scale() == Scale::log ? std::log(estimate) : estimate;
  const double gap = std::fabs(from_interval.center() - est) / from_interval.se();
  if (gap <= threshold) return std::nullopt;
  std::ostringstream s;
  s << "interval midpoint and estimate differ by " << gap << " standard errors (threshold " << threshold
    << "); the reported interval looks asymmetric, so probabilities that assume a symmetric distribution are "
       "doubtful";
  return s.str();
}

// ---------------------------------------------------------------------------
// 2x2 effect measures

/// Group 1 has `a` events and `b` non-events; group 2 has `c` and `d`.
struct TwoByTwo {
  double a, b, c, d;

  TwoByTwo(double a_, double b_, double c_, double d_) : a(a_), b(b_), c(c_), d(d_) {
    if (a < 0 || b < 0 || c < 0 || d < 0) throw Error("2x2 counts must be nonnegative");
    if (a + b <= 0 || c + d <= 0) throw Error("each group of a 2x2 table needs at least one case");
  }
};

inline double odds_ratio(const TwoByTwo& t) {
  if (t.b == 0) throw Error("odds ratio undefined: group 1 has no non-events (b = 0)");
  if (t.c == 0) throw Error("odds ratio undefined: group 2 has no events (c = 0)");
  return (t.a * t.d) / (t.b * t.c);
}

inline double risk_ratio(const TwoByTwo& t) {
  if (t.c == 0) throw Error("risk ratio undefined: group 2 risk is zero (c = 0)");
  return (t.a / (t.a + t.b)) / (t.c / (t.c + t.d));
}

}  // namespace tentative
