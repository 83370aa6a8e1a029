#pragma once

#include <array>
#include <string>
#include <vector>

#include "qmoments/model.hpp"

namespace qmoments {

// Order label of one term of the double expansion
// G^{a,n} = sum_{e,i} G^{a,n}_{e,i} hbar^{e/2} lambda^i (lambda formal, = 1).
struct ExpansionOrder {
  int e = 0;  // power of sqrt(hbar)
  int i = 0;  // adiabatic order
};

// Whether the closed forms provide G^{a,n}_{e,i} (possibly as an exact zero).
bool order_supported(ExpansionOrder order, int n, int a);

// G^{a,n}_{0,0}: the adiabatic-vacuum values; nonzero only for even a and n.
double moment_00(const OscillatorModel& model, int n, int a, double q);

// G^{a,n}_{0,1}: first adiabatic order; nonzero only for odd a, even n.
double moment_01(const OscillatorModel& model, int n, int a, const Jet& jet);

// G^{a,n}_{0,2}: second adiabatic order; nonzero only for even a and n.
double moment_02(const OscillatorModel& model, int n, int a, const Jet& jet);

// G^{a,n}_{0,3}: zero for even a/even n and for odd n; not derived for
// odd a/even n (UnsupportedMoment).
double moment_03(const OscillatorModel& model, int n, int a);

// G^{a,n}_{1,0}: order sqrt(hbar); nonzero only for even a, odd n.
double moment_10(const OscillatorModel& model, int n, int a, double q);

// G^{a,n}_{1,1}: zero for even n; for odd n the solved branch carries the
// modified prefactor table (inhomogeneity 4a-3n+2); the remaining odd-n
// branch is not solved by the expansion (UnsupportedMoment).
double moment_11(const OscillatorModel& model, int n, int a, const Jet& jet);

// Dispatch by (e, i); used by the CLI `moments` subcommand.
double moment(const OscillatorModel& model, int n, int a, ExpansionOrder order, const Jet& jet);

// Stacked value sum_{(e,i) supported, i <= adiabatic_order, e <= 1}
// hbar^{e/2} G^{a,n}_{e,i} at the given jet. Unsolved entries contribute
// zero. Serves the adiabatic closure of the hierarchy and adiabatic-vacuum
// initial data; accepts n up to two above the public cap.
double adiabatic_stack(const OscillatorModel& model, int n, int a, const Jet& jet,
                       int adiabatic_order);

// hbar-weighted sum of the G^{0,2}_{e,i} with i <= adiabatic_order and
// e <= hbar_order. Needs jet.order() >= adiabatic_order.
double g02_stack(const OscillatorModel& model, const Jet& jet, int hbar_order,
                 int adiabatic_order);

// Dimensionless second-moment block through orders (0,0)+(0,1)+(1,0)+(1,1)+(0,2).
struct SecondMomentBlock {
  double g02 = 0.5;  // position variance
  double g22 = 0.5;  // momentum variance
  double g12 = 0.0;  // covariance
  double x = 1.0;    // stiffness X
  double y = 0.0;    // second-order part of g02
};

SecondMomentBlock second_moment_block(const OscillatorModel& model, const Jet& jet);

// g02 g22 - g12^2; >= 1/4 for moments of an actual state.
double uncertainty_value(const SecondMomentBlock& block);

// Reduced form 1/4 - X Y^2 + (U''' qdot)^2/(32 m^2 w^6) X^{-5/2} Y, used as an
// independent route to the same number.
double uncertainty_value_reduced(const OscillatorModel& model, const Jet& jet);

// Z' = g02 + g22 (the zero-point energy is (hbar w / 2) Z').
double zero_point(const OscillatorModel& model, const Jet& jet);

// Closed form (1/2) X^{-1/2}(1+X) + Y(1-X) + (U''' qdot)^2/(32 m^2 w^6) X^{-5/2}.
double zero_point_closed(const OscillatorModel& model, const Jet& jet);

// O(hbar) static relation between the n = 2 moments, kept verbatim from the
// source expressions (note the 1 - U''/m w^2 combination, which differs in
// sign from X elsewhere); G^{0,2}_{2,0} must be supplied by the caller.
// Experimental: the expansion does not determine g02_20 itself.
double experimental_g22_h2_static(const OscillatorModel& model, double q, double g02_20);

// Sample point for the residual checks: q and time derivatives up to order 5.
struct SampleJet {
  std::array<double, 6> d{};
  double q() const { return d[0]; }
};

std::vector<SampleJet> make_sample_jets(const OscillatorModel& model, int count, unsigned seed);

struct ResidualItem {
  std::string equation;
  int n = 0;
  int a = 0;
  double residual = 0;
};

struct ResidualReport {
  double max_residual = 0;
  ResidualItem worst;
  long checks = 0;
  int skipped = 0;
  std::vector<ResidualItem> by_equation;  // per-equation maxima
};

// Substitutes the closed-form moments into their defining equations (time
// derivatives expanded through the jet) and reports the largest relative
// residual over all equations, 2 <= n <= max_n and the given sample jets.
ResidualReport residual_suite(const OscillatorModel& model, int max_n,
                              const std::vector<SampleJet>& jets);

}  // namespace qmoments
