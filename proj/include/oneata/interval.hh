#pragma once

#include "oneata/rational.hh"

#include <compare>
#include <optional>
#include <string>

namespace oneata {

/// Interval with natural endpoints; upper may be infinite.
struct Interval {
  long long lower = 0;
  std::optional<long long> upper; // nullopt = +inf
  bool lower_closed = true;
  bool upper_closed = false;

  /// Validating constructor: throws std::invalid_argument on empty intervals.
  static Interval make(long long lower, bool lower_closed, std::optional<long long> upper,
                       bool upper_closed);
  static Interval all() { return Interval{}; }
  static Interval point(long long k) { return make(k, true, k, true); }

  bool contains(const Rational &v) const;
  bool is_universal() const { return lower == 0 && lower_closed && !upper; }
  std::optional<Interval> intersect(const Interval &o) const;
  long long max_constant() const { return upper ? *upper : lower; }

  auto operator<=>(const Interval &) const = default;
  bool operator==(const Interval &) const = default;
};

std::string to_string(const Interval &i);

} // namespace oneata
