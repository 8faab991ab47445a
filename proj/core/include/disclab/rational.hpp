#pragma once

#include <boost/rational.hpp>
#include <string>

namespace disclab {

// Exact arithmetic for the biased construction: bias parameters, the target
// mean and the five-point probabilities are all small rationals, which lets
// kernel identities be checked without floating point.
using Rational = boost::rational<long long>;

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

// Parses "3/10", "-1", "0.25" or "1e-2"-free plain decimals into an exact
// rational. Throws Error{parameter} on malformed input.
Rational rational_from_string(const std::string& text);

std::string to_string(const Rational& r);

}  // namespace disclab
