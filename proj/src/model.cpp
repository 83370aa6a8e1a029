#include "qmoments/model.hpp"

#include <algorithm>
#include <string>

namespace qmoments {

OscillatorModel::OscillatorModel(double m, double omega, double hbar, std::vector<double> u_coeffs)
    : m_(m), omega_(omega), hbar_(hbar), u_(std::move(u_coeffs)) {
  if (!(m_ > 0)) throw ValidationError("model: mass must be positive");
  if (!(omega_ > 0)) throw ValidationError("model: omega must be positive");
  if (!(hbar_ > 0)) throw ValidationError("model: hbar must be positive");
  for (std::size_t k = 0; k < u_.size(); ++k) {
    if (!std::isfinite(u_[k]))
      throw ValidationError("model: u_coeffs[" + std::to_string(k) + "] is not finite");
    if (k < 3 && u_[k] != 0.0)
      throw ValidationError("model: u_coeffs[" + std::to_string(k) +
                            "] must be zero (constant, linear and quadratic terms are excluded)");
  }
  while (!u_.empty() && u_.back() == 0.0) u_.pop_back();
  if (degree() > kMaxPotentialDegree)
    throw ValidationError("model: U degree exceeds " + std::to_string(kMaxPotentialDegree));
}

OscillatorModel OscillatorModel::with_hbar(double hbar) const {
  return OscillatorModel(m_, omega_, hbar, u_);
}

double u_derivative(const OscillatorModel& model, double q, int k) {
  return model.u_derivative_at(q, k);
}

double stiffness(const OscillatorModel& model, double q) {
  const double x = 1.0 + u_derivative(model, q, 2) / (model.mass() * model.omega() * model.omega());
  if (!(x > 0.0))
    throw DomainError("stiffness: X = 1 + U''/(m omega^2) <= 0 at q = " + std::to_string(q));
  return x;
}

Jet::Jet(double q, double dq) : order_(1) {
  d_[0] = q;
  d_[1] = dq;
  validate();
}
Jet::Jet(double q, double dq, double ddq) : order_(2) {
  d_[0] = q;
  d_[1] = dq;
  d_[2] = ddq;
  validate();
}
Jet::Jet(double q, double dq, double ddq, double dddq) : order_(3) {
  d_[0] = q;
  d_[1] = dq;
  d_[2] = ddq;
  d_[3] = dddq;
  validate();
}
Jet::Jet(double q, double dq, double ddq, double dddq, double ddddq) : order_(4) {
  d_[0] = q;
  d_[1] = dq;
  d_[2] = ddq;
  d_[3] = dddq;
  d_[4] = ddddq;
  validate();
}

void Jet::validate() const {
  for (int k = 0; k <= order_; ++k)
    if (!std::isfinite(d_[k])) throw DomainError("jet: derivative " + std::to_string(k) + " not finite");
}

double Jet::at(int k) const {
  if (k < 0 || k > order_)
    throw RangeError("jet: derivative " + std::to_string(k) + " requested from order-" +
                     std::to_string(order_) + " jet");
  return d_[k];
}

void Jet::require_order(int k) const {
  if (order_ < k)
    throw RangeError("jet of order " + std::to_string(order_) + " where order >= " +
                     std::to_string(k) + " is required");
}

Jet classical_jet(const OscillatorModel& model, double q, double dq, int order) {
  const double m = model.mass();
  const double w2 = model.omega() * model.omega();
  const double ddq = -w2 * q - u_derivative(model, q, 1) / m;
  if (order <= 2) return Jet(q, dq, ddq);
  const double k = -w2 - u_derivative(model, q, 2) / m;  // d(ddq)/dq
  const double dddq = k * dq;
  if (order == 3) return Jet(q, dq, ddq, dddq);
  const double ddddq = k * ddq - u_derivative(model, q, 3) / m * dq * dq;
  return Jet(q, dq, ddq, dddq, ddddq);
}

}  // namespace qmoments
