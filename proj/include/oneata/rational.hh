#pragma once

#include <boost/rational.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace oneata {

using Rational = boost::rational<long long>;

/// Parses "3", "1/3", "0.25" exactly. Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// Decimal form when the expansion terminates within 6 digits, else "p/q".
std::string to_string(const Rational &r);

long long floor_of(const Rational &r);
long long ceil_of(const Rational &r);
inline bool is_integer(const Rational &r) { return r.denominator() == 1; }
inline Rational fract(const Rational &r) { return r - Rational(floor_of(r)); }

/// Simplest rational strictly/weakly inside (lo, hi). Either side may be open
/// or absent. Returns nullopt when the interval is empty.
struct RationalEnd {
  Rational value;
  bool closed;
};
std::optional<Rational> simplest_between(const std::optional<RationalEnd> &lo,
                                         const std::optional<RationalEnd> &hi);

} // namespace oneata
