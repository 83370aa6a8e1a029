#include <doctest.h>

#include "qmoments/coefficients.hpp"
#include "qmoments/model.hpp"

using namespace qmoments;

TEST_CASE("rational helpers") {
  CHECK(factorial_int(6) == 720);
  CHECK(double_factorial_int(7) == 105);
  CHECK(double_factorial_int(-1) == 1);
  CHECK(binomial_rat(5, 2) == Rational(10));
  CHECK(binomial_rat(5, 7) == Rational(0));
  CHECK(pow2_rat(-3) == Rational(1, 8));
  // Gamma(1/2) = sqrt(pi), Gamma(3/2) = sqrt(pi)/2, Gamma(5/2) = 3 sqrt(pi)/4
  CHECK(gamma_half_over_sqrt_pi(1) == Rational(1));
  CHECK(gamma_half_over_sqrt_pi(3) == Rational(1, 2));
  CHECK(gamma_half_over_sqrt_pi(5) == Rational(3, 4));
  CHECK(to_fraction_string(Rational(-3, 16)) == "-3/16");
  CHECK(to_fraction_string(Rational(0)) == "0/1");
}

TEST_CASE("C coefficients: anchors") {
  CHECK(c_coeff(2, 1) == Rational(-1, 8));
  CHECK(c_coeff(4, 3) == Rational(-3, 16));  // -2^{-6} 4!/2!
  // one descending step; the inhomogeneity vanishes because 2a - n = 0
  CHECK(c_coeff(4, 1) == Rational(-3, 16));
}

TEST_CASE("C coefficients: closed form equals recurrence for all n <= 16") {
  for (int n = 2; n <= kMaxMomentOrder; n += 2)
    for (int a = 1; a < n; a += 2) CHECK(c_coeff(n, a) == c_coeff_closed(n, a));
}

TEST_CASE("C coefficients: range errors") {
  CHECK_THROWS_AS(c_coeff(3, 1), RangeError);
  CHECK_THROWS_AS(c_coeff(4, 2), RangeError);
  CHECK_THROWS_AS(c_coeff(4, 5), RangeError);
  CHECK_THROWS_AS(c_coeff(18, 1), RangeError);
}

TEST_CASE("A/B tables: seeds and hand-computed n = 4 values") {
  const auto [a2, b2] = ab_coeffs(2);
  CHECK(a2.at(0) == Rational(0));
  CHECK(a2.at(2) == Rational(-1, 8));
  CHECK(b2.at(0) == Rational(0));
  CHECK(b2.at(2) == Rational(3, 4));

  const auto [a4, b4] = ab_coeffs(4);
  CHECK(a4.at(0) == Rational(0));
  CHECK(a4.at(2) == Rational(-1, 16));  // C_{1,4}/(n-1)
  CHECK(a4.at(4) == Rational(-3, 8));   // C_{3,4} + 3 A_{2,4}
  CHECK(b4.at(2) == Rational(1, 2));    // -(n+4)/(n-1) C_{1,4}
  CHECK(b4.at(4) == Rational(9, 4));    // (2a-n-6) C_{3,4} + 3 B_{2,4} at a = 3
}

TEST_CASE("A'/B' anchors") {
  const auto [ap2, bp2] = ap_bp(2);
  CHECK(ap2 == Rational(1, 16));
  CHECK(bp2 == Rational(-5, 16));
  const auto [ap4, bp4] = ap_bp(4);
  CHECK(ap4 == Rational(3, 16));
  CHECK(bp4 == Rational(-15, 16));
}

TEST_CASE("D coefficients: frozen values and parity errors") {
  CHECK(d_coeff(3, 2) == Rational(1, 12));
  CHECK(d_coeff(3, 0) == Rational(-1, 12));
  CHECK(d_coeff(5, 4) == Rational(1, 4));
  CHECK(d_coeff(5, 2) == Rational(1, 12));
  CHECK(d_coeff(5, 0) == Rational(-5, 12));
  CHECK(d_coeff(7, 6) == Rational(15, 16));
  CHECK_THROWS_AS(d_coeff(4, 2), RangeError);
  CHECK_THROWS_AS(d_coeff(5, 1), RangeError);
  CHECK_THROWS_AS(d_coeff(5, 5), RangeError);
}

TEST_CASE("D closed form equals recurrence for odd n <= 9 (all branches of b)") {
  for (int n = 3; n <= 9; n += 2)
    for (int a = 0; a < n; a += 2) CHECK(d_coeff(n, a) == d_coeff_closed(n, a));
}

TEST_CASE("D-tilde table (shifted inhomogeneity)") {
  CHECK(dtilde_coeff(3, 2) == Rational(5, 24));  // (n+2)/(12 pi) Gamma(3/2) Gamma(1/2)
  CHECK(dtilde_coeff(3, 0) == Rational(7, 24));
  CHECK(dtilde_coeff(5, 4) == Rational(7, 16));
  CHECK(dtilde_coeff(5, 2) == Rational(13, 48));
  CHECK(dtilde_coeff(5, 0) == Rational(25, 48));
}

TEST_CASE("vanishing-sum identities hold exactly through n = 16") {
  for (int n = 2; n <= kMaxMomentOrder; n += 2) {
    const IdentityReport rep = identity_report(n);
    CHECK(rep.binom_sum == Rational(0));
    CHECK(rep.ab_sum == Rational(0));
  }
}

TEST_CASE("coefficient table invariants") {
  for (int n : {2, 4, 8, 16}) {
    const CoeffTable t = coeff_table(n);
    CHECK(t.a_tab.at(0) == Rational(0));
    CHECK(t.b_tab.at(0) == Rational(0));
    CHECK(t.c.at(n - 1) ==
          Rational(-factorial_int(n), (BigInt(1) << (n + 2)) * factorial_int(n / 2)));
    CHECK(static_cast<int>(t.c.size()) == n / 2);
    CHECK(static_cast<int>(t.a_tab.size()) == n / 2 + 1);
  }
}
