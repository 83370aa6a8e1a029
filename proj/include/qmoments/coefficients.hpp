#pragma once

#include <map>
#include <utility>

#include "qmoments/rational.hpp"

namespace qmoments {

// Exact expansion coefficients of the closed-form adiabatic moment solutions.
// The descending recurrences are the definitions; the closed-form expressions
// are validators only.

// C_{a,n} for odd a in [1, n-1], even n: prefactors of the first-adiabatic-order
// correlation moments. Seeded by C_{n-1,n} = -2^{-(n+2)} n!/(n/2)!.
Rational c_coeff(int n, int a);

// Closed-form evaluation of the same coefficient (validator).
Rational c_coeff_closed(int n, int a);

// A_{a,n}, B_{a,n} for even a in [0, n]: second-adiabatic-order ansatz
// coefficients, built from A_{0,n} = B_{0,n} = 0 by the odd-a recursions.
std::pair<std::map<int, Rational>, std::map<int, Rational>> ab_coeffs(int n);

// A'_n, B'_n: coefficients of the a = 0 second-order solution, fixed by the
// third-order consistency condition.
std::pair<Rational, Rational> ap_bp(int n);

// D_{a,n} for even a in [0, n-1], odd n: prefactors of the order-sqrt(hbar)
// moments, via the descending recurrence with inhomogeneity factor 4a-3n-1.
Rational d_coeff(int n, int a);

// Closed-form evaluation (validator; the recurrence value is authoritative).
Rational d_coeff_closed(int n, int a);

// Variant table with the inhomogeneity factor 4a-3n+2, as needed at first
// adiabatic order and O(sqrt(hbar)).
Rational dtilde_coeff(int n, int a);

struct IdentityReport {
  Rational binom_sum;  // sum_a binom(n/2,a/2)^2 binom(n,a)^{-1} (2a-n)
  Rational ab_sum;     // sum_a binom(n/2,a/2)(2a-n)(6 A_{a,n} + B_{a,n})
};

// Both sums must be exactly zero for every even n.
IdentityReport identity_report(int n);

struct CoeffTable {
  int n = 0;
  std::map<int, Rational> c;      // odd a in [1, n-1]
  std::map<int, Rational> a_tab;  // even a in [0, n]
  std::map<int, Rational> b_tab;  // even a in [0, n]
  Rational a_prime;
  Rational b_prime;
};

CoeffTable coeff_table(int n);

namespace detail {

// The moment-hierarchy closure evaluates closed forms two orders above the
// truncation, so the raw table builders go slightly past the public cap.
inline constexpr int kCoeffLimit = 18;

std::map<int, Rational> c_table_raw(int n);
std::pair<std::map<int, Rational>, std::map<int, Rational>> ab_tables_raw(int n);
std::pair<Rational, Rational> ap_bp_raw(int n);
// shift = 0: the 4a-3n-1 table; shift = 3: the 4a-3n+2 variant.
std::map<int, Rational> d_table_raw(int n, int shift);

}  // namespace detail

}  // namespace qmoments
