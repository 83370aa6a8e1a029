#include "qmoments/rational.hpp"

namespace qmoments {

BigInt factorial_int(int n) {
  if (n < 0) throw RangeError("factorial of negative integer");
  BigInt r = 1;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

BigInt double_factorial_int(int n) {
  if (n < -1) throw RangeError("double factorial of integer below -1");
  BigInt r = 1;
  for (int k = n; k > 1; k -= 2) r *= k;
  return r;
}

Rational binomial_rat(int n, int k) {
  if (k < 0 || k > n) return Rational(0);
  return Rational(factorial_int(n), factorial_int(k) * factorial_int(n - k));
}

Rational pow2_rat(int e) {
  BigInt p = BigInt(1) << (e >= 0 ? e : -e);
  return e >= 0 ? Rational(p) : Rational(1, p);
}

Rational gamma_half_over_sqrt_pi(int j) {
  if (j < 1 || j % 2 == 0) throw RangeError("gamma_half_over_sqrt_pi requires odd j >= 1");
  const int k = (j - 1) / 2;
  return Rational(double_factorial_int(2 * k - 1), BigInt(1) << k);
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

std::string to_fraction_string(const Rational& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

}  // namespace qmoments
