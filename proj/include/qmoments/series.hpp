#pragma once

#include <array>
#include <cmath>

#include "qmoments/errors.hpp"

namespace qmoments {

// Truncated Taylor polynomial in t about t = 0. The number of *trusted*
// coefficients is tracked explicitly: products and compositions only keep
// coefficients that are fully determined by trusted inputs, so time
// derivatives extracted from a series are exact (to roundoff), never
// contaminated by unknown higher-order data.
class TSeries {
 public:
  static constexpr int kCap = 8;

  TSeries() = default;
  explicit TSeries(double v, int len = 1) : len_(len) { c_[0] = v; }

  // Series of a quantity given by its time derivatives d[0..count-1],
  // d[k] = d^k x / dt^k at t = 0.
  static TSeries from_derivatives(const double* d, int count);

  int length() const { return len_; }
  double coeff(int k) const { return k < len_ ? c_[k] : 0.0; }
  double value() const { return c_[0]; }

  // k-th time derivative at t = 0; RangeError if not determined.
  double deriv(int k) const;

  // d/dt of the series (one fewer trusted coefficient).
  TSeries time_derivative() const;

  TSeries& operator+=(const TSeries& o);
  TSeries& operator-=(const TSeries& o);
  TSeries& operator*=(double s);

  friend TSeries operator+(TSeries a, const TSeries& b) { return a += b; }
  friend TSeries operator-(TSeries a, const TSeries& b) { return a -= b; }
  friend TSeries operator*(TSeries a, double s) { return a *= s; }
  friend TSeries operator*(double s, TSeries a) { return a *= s; }
  friend TSeries operator/(TSeries a, double s) { return a *= 1.0 / s; }
  friend TSeries operator-(const TSeries& a);
  friend TSeries operator+(TSeries a, double s) { a.c_[0] += s; return a; }
  friend TSeries operator+(double s, TSeries a) { a.c_[0] += s; return a; }
  friend TSeries operator-(TSeries a, double s) { a.c_[0] -= s; return a; }
  friend TSeries operator-(double s, const TSeries& a);
  friend TSeries operator*(const TSeries& a, const TSeries& b);

  // a^expo for real expo; requires a.value() > 0.
  friend TSeries pow(const TSeries& a, double expo);

 private:
  std::array<double, kCap> c_{};
  int len_ = 1;
};

}  // namespace qmoments
