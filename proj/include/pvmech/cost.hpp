#pragma once

#include <cctype>
#include <compare>
#include <limits>
#include <ostream>
#include <string>
#include <string_view>

#include "pvmech/rational.hpp"

namespace pvmech {

/// Nonnegative extended cost: either a finite rational or +infinity.
/// Addition and max saturate at infinity; 0 * infinity is 0 (a zero-probability
/// outcome contributes nothing).
class Cost {
 public:
  Cost() = default;
  Cost(Rational value) : value_(std::move(value)) {  // NOLINT(google-explicit-constructor)
    if (value_ < 0) throw InvalidArgument("negative cost " + pvmech::to_string(value_));
  }
  Cost(long long value) : Cost(Rational(value)) {}  // NOLINT(google-explicit-constructor)

  static Cost infinite() {
    Cost c;
    c.infinite_ = true;
    return c;
  }

  bool is_infinite() const { return infinite_; }
  bool is_finite() const { return !infinite_; }

  const Rational& value() const {
    if (infinite_) throw InvalidArgument("value() of an infinite cost");
    return value_;
  }

  double to_double() const {
    return infinite_ ? std::numeric_limits<double>::infinity() : pvmech::to_double(value_);
  }

  Cost& operator+=(const Cost& other) {
    if (other.infinite_) {
      infinite_ = true;
      value_ = 0;
    } else if (!infinite_) {
      value_ += other.value_;
    }
    return *this;
  }
  friend Cost operator+(Cost a, const Cost& b) { return a += b; }

  /// Scales by a nonnegative weight; weight 0 annihilates infinity.
  friend Cost operator*(const Rational& weight, const Cost& c) {
    if (weight < 0) throw InvalidArgument("negative weight on a cost");
    if (weight == 0) return Cost();
    if (c.infinite_) return infinite();
    return Cost(Rational(weight * c.value_));
  }

  friend bool operator==(const Cost& a, const Cost& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }
  friend std::strong_ordering operator<=>(const Cost& a, const Cost& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ <=> b.infinite_;
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (b.value_ < a.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  std::string to_string() const { return infinite_ ? std::string("inf") : pvmech::to_string(value_); }

  friend std::ostream& operator<<(std::ostream& os, const Cost& c) { return os << c.to_string(); }

 private:
  Rational value_{0};
  bool infinite_ = false;
};

inline Cost max(const Cost& a, const Cost& b) { return a < b ? b : a; }

/// Accepts "inf"/"infinity" (any case) or anything parse_rational accepts.
inline Cost parse_cost(std::string_view text) {
  std::string lower(text);
  for (auto& ch : lower) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  if (lower == "inf" || lower == "infinity" || lower == "+inf") return Cost::infinite();
  return Cost(parse_rational(text));
}

}  // namespace pvmech
