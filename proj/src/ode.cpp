#include "qmoments/ode.hpp"

#include <algorithm>
#include <cmath>

#include "qmoments/trajectory.hpp"

namespace qmoments {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

constexpr double kSafety = 0.9;
constexpr double kShrink = 0.2;  // growth clamp [0.2, 5.0]
constexpr double kGrow = 5.0;

double error_norm(const Eigen::VectorXd& err, const Eigen::VectorXd& y0,
                  const Eigen::VectorXd& y1, const OdeControls& c) {
  double acc = 0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double sc = c.abs_tol + c.rel_tol * std::max(std::fabs(y0[i]), std::fabs(y1[i]));
    const double r = err[i] / sc;
    acc += r * r;
  }
  return std::sqrt(acc / static_cast<double>(err.size()));
}

double initial_step_guess(const OdeRhs& rhs, double t0, const Eigen::VectorXd& y0,
                          const Eigen::VectorXd& f0, double dir, const OdeControls& c) {
  double dny = 0, dnf = 0;
  for (Eigen::Index i = 0; i < y0.size(); ++i) {
    const double sc = c.abs_tol + c.rel_tol * std::fabs(y0[i]);
    dny += (y0[i] / sc) * (y0[i] / sc);
    dnf += (f0[i] / sc) * (f0[i] / sc);
  }
  double h = (dny <= 1e-10 || dnf <= 1e-10) ? 1e-6 : 0.01 * std::sqrt(dny / dnf);
  h = std::min(h, c.max_step);
  // One explicit Euler probe to bound the second derivative.
  Eigen::VectorXd y1 = y0 + dir * h * f0;
  Eigen::VectorXd f1(y0.size());
  try {
    rhs(t0 + dir * h, y1, f1);
    double der2 = 0;
    for (Eigen::Index i = 0; i < y0.size(); ++i) {
      const double sc = c.abs_tol + c.rel_tol * std::fabs(y0[i]);
      const double d = (f1[i] - f0[i]) / sc;
      der2 += d * d;
    }
    der2 = std::sqrt(der2) / h;
    const double dnorm = std::max(std::sqrt(dnf), der2);
    const double h1 = dnorm <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / dnorm, 0.2);
    h = std::min({100.0 * h, h1, c.max_step});
  } catch (const DomainError&) {
    h *= 0.1;
  }
  return h;
}

}  // namespace

void dopri5_integrate(const OdeRhs& rhs, double t0, double t1, Eigen::VectorXd& y,
                      const OdeControls& controls, const OdeStepCallback& on_accept) {
  const Eigen::Index dim = y.size();
  const double dir = (t1 >= t0) ? 1.0 : -1.0;
  const double span = std::fabs(t1 - t0);
  if (span == 0.0) {
    if (on_accept) on_accept(t0, y);
    return;
  }

  Eigen::VectorXd k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim);
  Eigen::VectorXd ytmp(dim), ynew(dim), err(dim);

  double t = t0;
  if (on_accept && !on_accept(t, y)) return;

  rhs(t, y, k1);
  const bool fixed = controls.fixed_step > 0.0;
  double h = fixed ? controls.fixed_step
                   : (controls.initial_step > 0.0
                          ? controls.initial_step
                          : initial_step_guess(rhs, t0, y, k1, dir, controls));
  h = std::min(h, controls.max_step);
  double err_old = 1e-4;
  long steps = 0;

  while (dir * (t1 - t) > 0) {
    if (++steps > controls.max_steps)
      throw IntegrationFailure(t, "maximum number of steps exceeded");
    h = std::min(h, std::fabs(t1 - t));
    if (!fixed && h < 1e-14 * std::max(1.0, std::fabs(t)))
      throw IntegrationFailure(t, "step size underflow (stiffness or domain boundary)");
    const double hs = dir * h;

    bool domain_hit = false;
    try {
      ytmp = y + hs * (a21 * k1);
      rhs(t + c2 * hs, ytmp, k2);
      ytmp = y + hs * (a31 * k1 + a32 * k2);
      rhs(t + c3 * hs, ytmp, k3);
      ytmp = y + hs * (a41 * k1 + a42 * k2 + a43 * k3);
      rhs(t + c4 * hs, ytmp, k4);
      ytmp = y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
      rhs(t + c5 * hs, ytmp, k5);
      ytmp = y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
      rhs(t + hs, ytmp, k6);
      ynew = y + hs * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
      rhs(t + hs, ynew, k7);  // FSAL
    } catch (const DomainError&) {
      domain_hit = true;
    }

    if (domain_hit) {
      if (fixed) throw IntegrationFailure(t, "domain error in right-hand side");
      h *= 0.5;
      continue;
    }

    err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    if (!ynew.allFinite()) {
      if (fixed) throw IntegrationFailure(t, "non-finite state");
      h *= 0.5;
      continue;
    }

    if (fixed) {
      t += hs;
      y.swap(ynew);
      k1.swap(k7);
      if (on_accept && !on_accept(t, y)) return;
      continue;
    }

    const double enorm = error_norm(err, y, ynew, controls);
    if (enorm <= 1.0) {
      t += hs;
      y.swap(ynew);
      k1.swap(k7);
      if (on_accept && !on_accept(t, y)) return;
      // PI controller (order 5: alpha = 0.17, beta = 0.04).
      const double fac = kSafety * std::pow(std::max(enorm, 1e-16), -0.17) * std::pow(err_old, 0.04);
      h = std::min(h * std::clamp(fac, kShrink, kGrow), controls.max_step);
      err_old = std::max(enorm, 1e-4);
    } else {
      h *= std::clamp(kSafety * std::pow(enorm, -0.2), kShrink, 1.0);
    }
  }
}

}  // namespace qmoments
