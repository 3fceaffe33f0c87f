#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <compare>
#include <ostream>
#include <string>
#include <string_view>

#include "tentative/error.hpp"

namespace tentative {

using BigInt = boost::multiprecision::cpp_int;

/// Exact fraction in lowest terms with a positive denominator.
class Rational {
 public:
  Rational() = default;
  Rational(long long n) : value_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(const BigInt& num, const BigInt& den) {
    if (den == 0) throw Error("rational with zero denominator");
    value_ = boost::multiprecision::cpp_rational(num, den);
  }

  /// Accepts "3/4", "0.25", "-1.5", "7". Decimals are read exactly
  /// ("0.25" is 25/100 = 1/4).
  static Rational parse(std::string_view text) {
    auto fail = [&] { return Error("cannot parse '" + std::string(text) + "' as a fraction or decimal"); };
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.empty()) throw fail();

    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
      const Rational num = parse_decimal(text.substr(0, slash), fail);
      const Rational den = parse_decimal(text.substr(slash + 1), fail);
      if (den == Rational(0)) throw Error("fraction '" + std::string(text) + "' has a zero denominator");
      return num / den;
    }
    return parse_decimal(text, fail);
  }

  [[nodiscard]] BigInt numerator() const { return boost::multiprecision::numerator(value_); }
  [[nodiscard]] BigInt denominator() const { return boost::multiprecision::denominator(value_); }
  [[nodiscard]] double to_double() const { return value_.convert_to<double>(); }

  /// "n/d", or "n" when the denominator is 1.
  [[nodiscard]] std::string str() const {
    const BigInt d = denominator();
    return d == 1 ? numerator().str() : numerator().str() + "/" + d.str();
  }

  friend Rational operator+(const Rational& a, const Rational& b) { return Rational(a.value_ + b.value_); }
  friend Rational operator-(const Rational& a, const Rational& b) { return Rational(a.value_ - b.value_); }
  friend Rational operator*(const Rational& a, const Rational& b) { return Rational(a.value_ * b.value_); }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.value_ == 0) throw Error("division by zero rational");
    return Rational(a.value_ / b.value_);
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (a.value_ > b.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  explicit Rational(boost::multiprecision::cpp_rational v) : value_(std::move(v)) {}

  template <typename Fail>
  static Rational parse_decimal(std::string_view s, Fail&& fail) {
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
      negative = s.front() == '-';
      s.remove_prefix(1);
    }
    BigInt digits = 0;
    BigInt scale = 1;
    bool seen_digit = false;
    bool seen_point = false;
    for (char c : s) {
      if (c == '.' && !seen_point) {
        seen_point = true;
      } else if (c >= '0' && c <= '9') {
        digits = digits * 10 + (c - '0');
        if (seen_point) scale *= 10;
        seen_digit = true;
      } else {
        throw fail();
      }
    }
    if (!seen_digit) throw fail();
    return Rational(negative ? BigInt(-digits) : digits, scale);
  }

  boost::multiprecision::cpp_rational value_{0};
};

}  // namespace tentative
