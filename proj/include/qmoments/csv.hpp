#pragma once

#include <iosfwd>
#include <string>

#include "qmoments/effective.hpp"
#include "qmoments/trajectory.hpp"

namespace qmoments {

// Header: t,<columns...>,HQ,uncertainty,X; 17 significant digits per value.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
void write_trajectory_csv(const std::string& path, const Trajectory& traj);

// Reads t and q back from a trajectory CSV (any schema with t and q columns).
QPath read_qpath_csv(const std::string& path);

}  // namespace qmoments
