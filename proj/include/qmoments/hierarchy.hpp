#pragma once

#include <vector>

#include "qmoments/model.hpp"
#include "qmoments/ode.hpp"
#include "qmoments/trajectory.hpp"

namespace qmoments {

// Expectation values plus the dimensionless moments G^{a,n} for
// 2 <= n <= n_max, 0 <= a <= n (no n = 1 entries; those vanish identically).
struct MomentState {
  double t = 0;
  double q = 0;
  double p = 0;
  int n_max = 2;
  std::vector<double> g;

  static int index(int a, int n) { return n * (n + 1) / 2 - 3 + a; }
  static int count(int n_max) { return (n_max + 1) * (n_max + 2) / 2 - 3; }

  double moment(int a, int n) const;
  double& at(int a, int n);
};

enum class MomentForm { dimensionless, dimensionful };

// Applies G^{a,n} = hbar^{-n/2} (m omega)^{n/2-a} Gtilde^{a,n} entrywise,
// in the requested direction.
MomentState convert(const OscillatorModel& model, const MomentState& state, MomentForm target);

enum class InitMode { harmonic_vacuum, adiabatic_vacuum };

// Populates all moments up to state.n_max. harmonic_vacuum uses the U = 0
// ground-state values; adiabatic_vacuum evaluates the closed forms at the
// classical jet through the given adiabatic order (hbar orders 0 and 1/2).
MomentState init_state(const OscillatorModel& model, double q0, double p0, InitMode mode,
                       int n_max, int adiabatic_order = 2);

// Quantum Hamiltonian on the truncated state.
double hq(const OscillatorModel& model, const MomentState& state);

enum class Closure { truncate, adiabatic };

// Time derivative of the state at the given hbar order of the moment
// equations (0, 1 or 2 meaning hbar^0, hbar^{1/2}, hbar^1 terms kept).
MomentState rhs(const OscillatorModel& model, const MomentState& state, int hbar_order,
                Closure closure = Closure::truncate);

struct HierarchyControls {
  OdeControls ode;
  int hbar_order = 1;
  Closure closure = Closure::truncate;
  double uncertainty_tol = 1e-6;     // report when below 1/4 - tol
  bool abort_on_uncertainty = false;
  int record_stride = 1;             // keep every k-th accepted step
};

// Integrates the truncated hierarchy from state0.t to t_end, recording
// diagnostics (H_Q, uncertainty, X) at every recorded point. X <= 0, NaN and
// step underflow raise IntegrationFailure carrying the partial trajectory;
// uncertainty violations are counted (and abort only if requested).
Trajectory integrate(const OscillatorModel& model, const MomentState& state0, double t_end,
                     const HierarchyControls& controls);

// State vector layout used in trajectories: [q, p, g...].
MomentState unpack_state(const Eigen::VectorXd& y, double t, int n_max);
Eigen::VectorXd pack_state(const MomentState& s);
std::vector<std::string> state_columns(int n_max);

}  // namespace qmoments
