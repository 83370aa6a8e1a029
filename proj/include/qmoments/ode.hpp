#pragma once

#include <Eigen/Dense>

#include <functional>
#include <limits>

#include "qmoments/errors.hpp"

namespace qmoments {

struct OdeControls {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double max_step = std::numeric_limits<double>::infinity();
  double fixed_step = 0.0;    // > 0 disables step control
  double initial_step = 0.0;  // 0 selects automatically
  long max_steps = 50'000'000;
};

using OdeRhs = std::function<void(double, const Eigen::VectorXd&, Eigen::VectorXd&)>;

// Called after each accepted step; return false to stop early (not a failure).
using OdeStepCallback = std::function<bool(double, const Eigen::VectorXd&)>;

// Dormand-Prince 5(4) embedded pair with PI step control. Integrates y from
// t0 to t1 (either direction). DomainError from the right-hand side is
// handled by step shrinking; if the step underflows the failure is reported
// with the reached time. The callback also sees the initial point.
void dopri5_integrate(const OdeRhs& rhs, double t0, double t1, Eigen::VectorXd& y,
                      const OdeControls& controls, const OdeStepCallback& on_accept = {});

}  // namespace qmoments
