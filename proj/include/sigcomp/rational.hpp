#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace sigcomp {

// All utilities, welfare values and bound sides are exact rationals.
// Numerators/denominators stay tiny (denominators divide S*G), so a
// 64-bit rational never gets anywhere near overflow.
using Rational = boost::rational<std::int64_t>;

inline Rational rat(std::int64_t num, std::int64_t den = 1) {
  return Rational(num, den);
}

// Serializes as "num/den" in lowest terms, denominator always present
// ("1/1", "3/2", "0/1") so exact values survive round trips.
std::string to_fraction_string(const Rational& r);

// Accepts "p/q", an integer, or a plain decimal such as "0.25".
// Throws InputError on anything else or on q == 0.
Rational parse_fraction(std::string_view text);

}  // namespace sigcomp
