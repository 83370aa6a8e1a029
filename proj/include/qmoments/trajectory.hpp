#pragma once

#include <Eigen/Dense>

#include <limits>
#include <string>
#include <vector>

#include "qmoments/errors.hpp"

namespace qmoments {

struct TrajectoryPoint {
  double t = 0;
  Eigen::VectorXd y;
  double hq = 0;           // quantum Hamiltonian
  double uncertainty = 0;  // g02 g22 - g12^2
  double x = 1;            // stiffness at q
};

struct Trajectory {
  std::vector<std::string> columns;  // names of the y entries
  std::vector<TrajectoryPoint> points;
  int uncertainty_violations = 0;
  double first_violation_time = std::numeric_limits<double>::quiet_NaN();
  double min_uncertainty = std::numeric_limits<double>::infinity();

  bool empty() const { return points.empty(); }
  const TrajectoryPoint& back() const { return points.back(); }
};

struct IntegrationFailure : Error {
  IntegrationFailure(double t, const std::string& reason, Trajectory partial_traj = {})
      : Error("integration failed at t = " + std::to_string(t) + ": " + reason),
        time(t),
        reason(reason),
        partial(std::move(partial_traj)) {}
  double time;
  std::string reason;
  Trajectory partial;
};

}  // namespace qmoments
