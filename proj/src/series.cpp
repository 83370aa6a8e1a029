#include "qmoments/series.hpp"

#include <algorithm>

namespace qmoments {

namespace {
constexpr double kFact[] = {1, 1, 2, 6, 24, 120, 720, 5040};
}

TSeries TSeries::from_derivatives(const double* d, int count) {
  if (count < 1 || count > kCap) throw RangeError("series length out of range");
  TSeries s;
  s.len_ = count;
  for (int k = 0; k < count; ++k) s.c_[k] = d[k] / kFact[k];
  return s;
}

double TSeries::deriv(int k) const {
  if (k < 0 || k >= len_) throw RangeError("series derivative order not determined");
  return c_[k] * kFact[k];
}

TSeries TSeries::time_derivative() const {
  if (len_ < 2) throw RangeError("series too short to differentiate");
  TSeries r;
  r.len_ = len_ - 1;
  for (int k = 0; k + 1 < len_; ++k) r.c_[k] = c_[k + 1] * (k + 1);
  return r;
}

TSeries& TSeries::operator+=(const TSeries& o) {
  len_ = std::min(len_, o.len_);
  for (int k = 0; k < len_; ++k) c_[k] += o.c_[k];
  return *this;
}

TSeries& TSeries::operator-=(const TSeries& o) {
  len_ = std::min(len_, o.len_);
  for (int k = 0; k < len_; ++k) c_[k] -= o.c_[k];
  return *this;
}

TSeries& TSeries::operator*=(double s) {
  for (int k = 0; k < len_; ++k) c_[k] *= s;
  return *this;
}

TSeries operator-(const TSeries& a) {
  TSeries r = a;
  for (int k = 0; k < r.len_; ++k) r.c_[k] = -r.c_[k];
  return r;
}

TSeries operator-(double s, const TSeries& a) {
  TSeries r = -a;
  r.c_[0] += s;
  return r;
}

TSeries operator*(const TSeries& a, const TSeries& b) {
  TSeries r;
  r.len_ = std::min(a.len_, b.len_);
  for (int k = 0; k < r.len_; ++k) {
    double acc = 0;
    for (int j = 0; j <= k; ++j) acc += a.c_[j] * b.c_[k - j];
    r.c_[k] = acc;
  }
  return r;
}

TSeries pow(const TSeries& a, double expo) {
  const double a0 = a.c_[0];
  if (!(a0 > 0.0)) throw DomainError("series pow requires positive leading value");
  TSeries r;
  r.len_ = a.len_;
  r.c_[0] = std::pow(a0, expo);
  // k a0 y_k = sum_{j=1..k} ((expo+1) j - k) a_j y_{k-j}
  for (int k = 1; k < r.len_; ++k) {
    double acc = 0;
    for (int j = 1; j <= k; ++j) acc += ((expo + 1.0) * j - k) * a.c_[j] * r.c_[k - j];
    r.c_[k] = acc / (k * a0);
  }
  return r;
}

}  // namespace qmoments
