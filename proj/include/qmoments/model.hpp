#pragma once

#include <cmath>
#include <vector>

#include "qmoments/errors.hpp"

namespace qmoments {

// U(q) may not exceed this degree, so that U^{(6)} (the highest derivative
// entering the fourth adiabatic order) is still an exact polynomial of
// reasonable size.
inline constexpr int kMaxPotentialDegree = 12;

// Largest moment order handled by the coefficient tables.
inline constexpr int kMaxMomentOrder = 16;

// Anharmonic oscillator H = p^2/(2m) + (1/2) m omega^2 q^2 + U(q) with a
// polynomial anharmonicity U(q) = sum_{k>=3} c_k q^k.
class OscillatorModel {
 public:
  // u_coeffs[k] is the coefficient of q^k; entries 0..2 must be zero
  // (the quadratic part belongs to the harmonic term).
  OscillatorModel(double m, double omega, double hbar, std::vector<double> u_coeffs = {});

  double mass() const { return m_; }
  double omega() const { return omega_; }
  double hbar() const { return hbar_; }
  const std::vector<double>& u_coeffs() const { return u_; }
  int degree() const { return static_cast<int>(u_.size()) - 1; }
  bool harmonic() const { return u_.empty(); }

  // Returns a copy with a different hbar (for scaling sweeps).
  OscillatorModel with_hbar(double hbar) const;

  // Exact k-th derivative of the polynomial U at q; zero beyond the degree.
  template <class T>
  T u_derivative_at(const T& q, int k) const {
    if (k < 0) throw RangeError("u_derivative: negative order");
    const int deg = degree();
    if (k > deg) return q * 0.0;  // zero of the same scalar/series shape as q
    // Horner over the coefficients of U^{(k)}.
    T acc = q * 0.0;
    for (int j = deg; j >= k; --j) {
      double c = u_[j];
      for (int i = 0; i < k; ++i) c *= (j - i);
      acc = acc * q + c;
    }
    return acc;
  }

 private:
  double m_, omega_, hbar_;
  std::vector<double> u_;  // trimmed so the last entry is nonzero (or empty)
};

double u_derivative(const OscillatorModel& model, double q, int k);

// X(q) = 1 + U''(q)/(m omega^2); DomainError if X <= 0, where the
// quarter-integer powers of the closed forms are undefined.
double stiffness(const OscillatorModel& model, double q);

// q together with time derivatives up to order(); order 1..4 for public use.
class Jet {
 public:
  Jet(double q, double dq);
  Jet(double q, double dq, double ddq);
  Jet(double q, double dq, double ddq, double dddq);
  Jet(double q, double dq, double ddq, double dddq, double ddddq);

  int order() const { return order_; }
  double q() const { return d_[0]; }
  double dq() const { return d_[1]; }
  double ddq() const { return at(2); }
  double dddq() const { return at(3); }
  double ddddq() const { return at(4); }

  double at(int k) const;
  void require_order(int k) const;

 private:
  void validate() const;
  double d_[5] = {0, 0, 0, 0, 0};
  int order_ = 1;
};

// Jet obtained by differentiating the classical equation of motion:
// ddq = -omega^2 q - U'(q)/m, and so on up to the fourth derivative.
Jet classical_jet(const OscillatorModel& model, double q, double dq, int order = 4);

}  // namespace qmoments
