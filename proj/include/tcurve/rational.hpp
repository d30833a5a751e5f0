#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace tcurve {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rational frac(std::int64_t p, std::int64_t q) { return Rational(p, q); }

// Always "p/q", also for integers ("3/1"), so downstream parsers never guess.
std::string to_string(const Rational& x);

// Accepts "p/q", "p", and a leading sign. Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

bool is_integer(const Rational& x);

}  // namespace tcurve
