#pragma once

#include <vector>

#include "qmoments/model.hpp"
#include "qmoments/ode.hpp"
#include "qmoments/trajectory.hpp"

namespace qmoments {

// Coefficient functions of the higher-derivative equation of motion
// ddq = ddq_cl - (hbar/(2 m^2 w)) U'''(q) [f + f1 ddq + f2 ddq^2 + f3 dddq + f4 ddddq].
struct EffectiveCoeffs {
  double f = 0.5;
  double f1 = 0;
  double f2 = 0;
  double f3 = 0;
  double f4 = 0;
};

EffectiveCoeffs eff_coeffs(const OscillatorModel& model, double q, double qdot);

// Second-order reduced form: the bracket is evaluated on the classical jet,
// accurate to O(hbar^{3/2}) in the quantum corrections. adiabatic_order 2
// restricts to the second-order bracket; 4 (default) includes the
// fourth-order terms. iterate_once re-evaluates the bracket once with the
// corrected ddq (an O(hbar^2) refinement, off by default).
double rhs_reduced(const OscillatorModel& model, double q, double qdot, int adiabatic_order = 4,
                   bool iterate_once = false);

// The displayed equation solved for the fourth derivative (research form;
// carries the surplus runaway solutions of higher-derivative equations).
// SingularLeadingTerm when |U''' f4| < eps4.
double rhs_fourth(const OscillatorModel& model, double q, double qdot, double qddot,
                  double qdddot, double eps4 = 1e-12);

// Euler-Lagrange equation of the low-energy effective action: mass correction
// M(q) = m + hbar U'''^2/(32 m^2 w^5 X^{5/2}) and quantum potential
// (hbar w / 2) sqrt(X); agrees with the second-adiabatic-order reduced form
// through O(hbar).
double gamma_eff_rhs(const OscillatorModel& model, double q, double qdot);

enum class EffectiveForm { reduced, fourth };

struct EffectiveControls {
  OdeControls ode;
  int adiabatic_order = 4;
  double eps4 = 1e-12;
};

// Integrates the effective equation from (q0, p0). The fourth form starts
// from the classical jet (perturbative initial data). Diagnostics carry the
// reconstructed G^{0,2} and the block uncertainty at the classical jet.
Trajectory integrate_effective(const OscillatorModel& model, double q0, double p0, double t_end,
                               const EffectiveControls& controls,
                               EffectiveForm form = EffectiveForm::reduced);

// Time-ordered q(t) samples extracted from a trajectory.
struct QPath {
  std::vector<double> t;
  std::vector<double> q;
};

QPath to_qpath(const Trajectory& traj);

enum class CompareMetric { sup, l2 };

// Norm of q_A - q_B over the overlapping time range, resampled by cubic
// interpolation onto the coarser grid. EmptyOverlap if the ranges are
// disjoint.
double compare(const QPath& a, const QPath& b, CompareMetric metric);

// Least-squares slope of log(gap) versus log(hbar) (scaling-exponent fits).
double loglog_slope(const std::vector<double>& hbars, const std::vector<double>& gaps);

}  // namespace qmoments
