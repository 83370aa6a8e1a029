#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "qmoments/errors.hpp"

namespace qmoments {

using BigInt = boost::multiprecision::cpp_int;

// Exact fraction, always in lowest terms with positive denominator
// (canonical form is maintained by the backend).
using Rational = boost::multiprecision::cpp_rational;

BigInt factorial_int(int n);

// n!! with the conventions (-1)!! = 0!! = 1.
BigInt double_factorial_int(int n);

Rational binomial_rat(int n, int k);

// 2^e for e of either sign.
Rational pow2_rat(int e);

// Gamma(j/2)/sqrt(pi) for odd j >= 1, which is the rational (j-2)!!/2^{(j-1)/2}.
Rational gamma_half_over_sqrt_pi(int j);

double to_double(const Rational& r);

// Stable "p/q" rendering (denominator always printed).
std::string to_fraction_string(const Rational& r);

}  // namespace qmoments
