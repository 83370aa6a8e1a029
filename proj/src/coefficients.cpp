#include "qmoments/coefficients.hpp"

#include <string>

#include "qmoments/model.hpp"

namespace qmoments {

namespace {

void check_even_n(int n, const char* who) {
  if (n < 2 || n > kMaxMomentOrder || n % 2 != 0)
    throw RangeError(std::string(who) + ": n must be even in [2, " +
                     std::to_string(kMaxMomentOrder) + "], got " + std::to_string(n));
}

void check_odd_n(int n, const char* who) {
  if (n < 3 || n > kMaxMomentOrder - 1 || n % 2 != 1)
    throw RangeError(std::string(who) + ": n must be odd in [3, " +
                     std::to_string(kMaxMomentOrder - 1) + "], got " + std::to_string(n));
}

// (n-a)! (a-1)! / (2^{n+2} ((n-a)/2)! (a/2)!) for even a: the inhomogeneous
// weight of the C recurrence.
Rational c_inhom_weight(int n, int a) {
  return Rational(factorial_int(n - a) * factorial_int(a - 1),
                  (BigInt(1) << (n + 2)) * factorial_int((n - a) / 2) * factorial_int(a / 2));
}

// Pochhammer (x)_k = x (x+1) ... (x+k-1).
Rational pochhammer(const Rational& x, int k) {
  Rational r = 1;
  for (int i = 0; i < k; ++i) r *= x + i;
  return r;
}

}  // namespace

namespace detail {

std::map<int, Rational> c_table_raw(int n) {
  if (n < 2 || n > kCoeffLimit || n % 2 != 0) throw RangeError("c_table_raw: bad n");
  std::map<int, Rational> c;
  c[n - 1] = Rational(-factorial_int(n), (BigInt(1) << (n + 2)) * factorial_int(n / 2));
  // Descend over even equation indices a = n-2, n-4, ..., 2.
  for (int a = n - 2; a >= 2; a -= 2)
    c[a - 1] = Rational(n - a, a) * c[a + 1] - c_inhom_weight(n, a) * (2 * a - n);
  return c;
}

std::pair<std::map<int, Rational>, std::map<int, Rational>> ab_tables_raw(int n) {
  const auto c = c_table_raw(n);
  std::map<int, Rational> a_tab{{0, Rational(0)}};
  std::map<int, Rational> b_tab{{0, Rational(0)}};
  for (int a = 1; a < n; a += 2) {
    a_tab[a + 1] = c.at(a) / (n - a) + Rational(a, n - a) * a_tab.at(a - 1);
    b_tab[a + 1] = c.at(a) * (2 * a - n - 6) / (n - a) + Rational(a, n - a) * b_tab.at(a - 1);
  }
  return {a_tab, b_tab};
}

std::pair<Rational, Rational> ap_bp_raw(int n) {
  const auto [a_tab, b_tab] = ab_tables_raw(n);
  Rational num_a = 0, den_a = 0, num_b = 0, den_b = 0;
  for (int a = 0; a <= n; a += 2) {
    const Rational w = binomial_rat(n / 2, a / 2);
    const Rational w2 = w * w / binomial_rat(n, a);
    num_a += w * a_tab.at(a);
    den_a += w2;
    num_b += w * b_tab.at(a) * (2 * a - n - 12);
    den_b += w2 * (2 * a - n - 12);
  }
  if (den_a == 0 || den_b == 0) throw RangeError("ap_bp: denominator sum vanished");
  return {-num_a / den_a, -num_b / den_b};
}

std::map<int, Rational> d_table_raw(int n, int shift) {
  if (n < 3 || n > kCoeffLimit - 1 || n % 2 != 1) throw RangeError("d_table_raw: bad n");
  std::map<int, Rational> d;
  Rational above = 0;  // D_{n+1,n} := 0
  for (int a = n; a >= 1; a -= 2) {
    // Gamma(a/2) Gamma((n-a+1)/2) = pi * rational; the pi cancels the 1/(12 pi).
    const Rational gg = gamma_half_over_sqrt_pi(a) * gamma_half_over_sqrt_pi(n - a + 1);
    d[a - 1] = Rational(n - a, a) * above + Rational(4 * a - 3 * n - 1 + shift, 12) * gg;
    above = d[a - 1];
  }
  return d;
}

}  // namespace detail

Rational c_coeff(int n, int a) {
  check_even_n(n, "c_coeff");
  if (a < 1 || a > n - 1 || a % 2 != 1) throw RangeError("c_coeff: a must be odd in [1, n-1]");
  return detail::c_table_raw(n).at(a);
}

Rational c_coeff_closed(int n, int a) {
  check_even_n(n, "c_coeff_closed");
  if (a < 1 || a > n - 1 || a % 2 != 1)
    throw RangeError("c_coeff_closed: a must be odd in [1, n-1]");
  const int ae = a + 1;  // even display index; the formula yields C_{ae-1,n}
  Rational result = -c_inhom_weight(n, ae) * (2 * ae - n);
  Rational sum = 0;
  for (int b = 0; b <= (n - ae - 2) / 2; ++b) {
    Rational prod = 1;
    for (int c = 0; c <= b; ++c) prod *= Rational(n - (ae + 2 * c), ae + 2 * c);
    const int ab = ae + 2 * (b + 1);
    sum += prod *
           Rational(factorial_int(n - ab) * factorial_int(ab - 1),
                    factorial_int((n - ab) / 2) * factorial_int(ab / 2)) *
           (2 * ab - n);
  }
  return result - pow2_rat(-n - 2) * sum;
}

std::pair<std::map<int, Rational>, std::map<int, Rational>> ab_coeffs(int n) {
  check_even_n(n, "ab_coeffs");
  return detail::ab_tables_raw(n);
}

std::pair<Rational, Rational> ap_bp(int n) {
  check_even_n(n, "ap_bp");
  return detail::ap_bp_raw(n);
}

Rational d_coeff(int n, int a) {
  check_odd_n(n, "d_coeff");
  if (a < 0 || a > n - 1 || a % 2 != 0) throw RangeError("d_coeff: a must be even in [0, n-1]");
  return detail::d_table_raw(n, 0).at(a);
}

Rational dtilde_coeff(int n, int a) {
  check_odd_n(n, "dtilde_coeff");
  if (a < 0 || a > n - 1 || a % 2 != 0)
    throw RangeError("dtilde_coeff: a must be even in [0, n-1]");
  return detail::d_table_raw(n, 3).at(a);
}

Rational d_coeff_closed(int n, int a) {
  check_odd_n(n, "d_coeff_closed");
  if (a < 0 || a > n - 1 || a % 2 != 0)
    throw RangeError("d_coeff_closed: a must be even in [0, n-1]");
  const int b = (n - a - 1) / 2;
  const Rational gn = gamma_half_over_sqrt_pi(n);  // Gamma(n/2)/sqrt(pi)
  if (b == 0) return Rational(n - 1, 12) * gn;
  if (b == 1) return Rational(3 * n - 11, 12 * (n - 2)) * gn;
  // General branch: every bracket term carries sqrt(pi); combined with
  // Gamma(n/2) the pi cancels against the overall 1/(12 pi).
  Rational bracket = Rational(factorial_int(b)) * (n - 1);
  bracket += (n - 8 * b - 1) * gamma_half_over_sqrt_pi(2 * b + 1);
  for (int c = 0; c <= b - 2; ++c) {
    const int sign = (c % 2 == 0) ? 1 : -1;
    bracket -= sign * (n - 8 * (b - c - 1) - 1) * gamma_half_over_sqrt_pi(2 * (b - c) - 1) *
               pochhammer(Rational(-b), c + 1);
  }
  const Rational poch = pochhammer(Rational(2 - n, 2), b);  // (1 - n/2)_b
  const int sign_b = (b % 2 == 0) ? 1 : -1;
  return sign_b * gn * bracket / (12 * poch);
}

IdentityReport identity_report(int n) {
  check_even_n(n, "identity_report");
  const auto [a_tab, b_tab] = detail::ab_tables_raw(n);
  IdentityReport rep{Rational(0), Rational(0)};
  for (int a = 0; a <= n; a += 2) {
    const Rational w = binomial_rat(n / 2, a / 2);
    rep.binom_sum += w * w / binomial_rat(n, a) * (2 * a - n);
    rep.ab_sum += w * (2 * a - n) * (6 * a_tab.at(a) + b_tab.at(a));
  }
  return rep;
}

CoeffTable coeff_table(int n) {
  check_even_n(n, "coeff_table");
  CoeffTable t;
  t.n = n;
  t.c = detail::c_table_raw(n);
  std::tie(t.a_tab, t.b_tab) = detail::ab_tables_raw(n);
  std::tie(t.a_prime, t.b_prime) = detail::ap_bp_raw(n);
  return t;
}

}  // namespace qmoments
