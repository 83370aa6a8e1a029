#include <doctest.h>

#include <cmath>
#include <random>

#include "qmoments/adiabatic.hpp"
#include "qmoments/hierarchy.hpp"

using namespace qmoments;

namespace {
OscillatorModel quartic24(double hbar = 1.0) {
  return OscillatorModel(1, 1, hbar, {0, 0, 0, 0, 1.0 / 24});
}
OscillatorModel harmonic() { return OscillatorModel(1, 1, 1); }
}

TEST_CASE("convert: dimensionless vs dimensionful") {
  const OscillatorModel m(2.0, 3.0, 0.25);
  MomentState s = init_state(m, 0.5, -0.25, InitMode::harmonic_vacuum, 4);
  // ground-state variance: Gtilde^{0,2} = hbar/(2 m omega) <-> G^{0,2} = 1/2
  MomentState dim = convert(m, s, MomentForm::dimensionful);
  CHECK(dim.moment(0, 2) == doctest::Approx(0.25 / (2 * 2.0 * 3.0)));
  // exponent n/2 - a = 0 for (a,n) = (1,2): only the hbar power acts
  MomentState s2 = s;
  s2.at(1, 2) = 0.125;
  MomentState dim2 = convert(m, s2, MomentForm::dimensionful);
  CHECK(dim2.moment(1, 2) == doctest::Approx(0.125 * 0.25));
  // round trip is the identity
  MomentState back = convert(m, dim, MomentForm::dimensionless);
  for (std::size_t i = 0; i < s.g.size(); ++i)
    CHECK(back.g[i] == doctest::Approx(s.g[i]).epsilon(1e-15));
}

TEST_CASE("init_state: harmonic vacuum values") {
  const OscillatorModel m = quartic24();
  MomentState s2 = init_state(m, 1.0, 0.0, InitMode::harmonic_vacuum, 2);
  CHECK(s2.moment(0, 2) == 0.5);
  CHECK(s2.moment(2, 2) == 0.5);
  CHECK(s2.moment(1, 2) == 0.0);
  MomentState s4 = init_state(m, 1.0, 0.0, InitMode::harmonic_vacuum, 4);
  CHECK(s4.moment(0, 4) == 0.75);
  CHECK(s4.moment(2, 4) == 0.25);
  CHECK(s4.moment(4, 4) == 0.75);
  CHECK(s4.moment(1, 4) == 0.0);
  CHECK(s4.moment(0, 3) == 0.0);
  // harmonic mode ignores U entirely
  MomentState h4 = init_state(harmonic(), 1.0, 0.0, InitMode::harmonic_vacuum, 4);
  for (std::size_t i = 0; i < s4.g.size(); ++i) CHECK(s4.g[i] == h4.g[i]);
}

TEST_CASE("init_state: adiabatic vacuum reduces to harmonic for U = 0") {
  MomentState a = init_state(harmonic(), 0.7, 0.3, InitMode::adiabatic_vacuum, 6, 0);
  MomentState h = init_state(harmonic(), 0.7, 0.3, InitMode::harmonic_vacuum, 6);
  for (std::size_t i = 0; i < a.g.size(); ++i) CHECK(a.g[i] == doctest::Approx(h.g[i]));
  // with anharmonicity the adiabatic values evaluate the closed forms at the jet
  const OscillatorModel m = quartic24();
  MomentState s = init_state(m, 1.0, 0.5, InitMode::adiabatic_vacuum, 4, 2);
  const Jet jet = classical_jet(m, 1.0, 0.5, 2);
  CHECK(s.moment(0, 2) ==
        doctest::Approx(moment_00(m, 2, 0, 1.0) + moment_02(m, 2, 0, jet)));
  CHECK(s.moment(1, 2) == doctest::Approx(moment_01(m, 2, 1, jet) +
                                          std::sqrt(m.hbar()) * 0.0));  // (1,1) zero for even n
  CHECK(s.moment(2, 3) ==
        doctest::Approx(std::sqrt(m.hbar()) *
                        (moment_10(m, 3, 2, 1.0) + moment_11(m, 3, 2, jet))));
}

TEST_CASE("hq anchors") {
  const OscillatorModel h = harmonic();
  MomentState vac = init_state(h, 0.0, 0.0, InitMode::harmonic_vacuum, 2);
  CHECK(hq(h, vac) == doctest::Approx(0.5));  // hbar omega / 2

  // all moments zero -> classical energy
  MomentState cls = vac;
  cls.q = 0.7;
  cls.p = -0.4;
  for (auto& g : cls.g) g = 0;
  const OscillatorModel m = quartic24();
  CHECK(hq(m, cls) == doctest::Approx(0.5 * 0.16 + 0.5 * 0.49 + std::pow(0.7, 4) / 24));

  // quartic, N = 2: classical + (hbar w/2)(g02+g22) + (hbar/2mw) U'' g02
  MomentState s = init_state(m, 1.0, 0.5, InitMode::harmonic_vacuum, 2);
  const double classical = 0.5 * 0.25 + 0.5 + 1.0 / 24;
  CHECK(hq(m, s) ==
        doctest::Approx(classical + 0.5 * (0.5 + 0.5) + 0.5 * u_derivative(m, 1.0, 2) * 0.5));
}

TEST_CASE("rhs: harmonic vacuum is an exact fixed point of the moment sector") {
  const OscillatorModel h = harmonic();
  MomentState s = init_state(h, 0.3, -0.2, InitMode::harmonic_vacuum, 8);
  for (int order : {0, 1, 2}) {
    MomentState d = rhs(h, s, order);
    CHECK(d.q == doctest::Approx(-0.2));
    CHECK(d.p == doctest::Approx(-0.3));
    for (double g : d.g) CHECK(g == 0.0);  // exactly stationary
  }
}

TEST_CASE("rhs: order-hbar^0 n=2 block matches the hand transcription") {
  const OscillatorModel m = quartic24();
  MomentState s = init_state(m, 1.0, 0.5, InitMode::harmonic_vacuum, 2);
  s.at(0, 2) = 0.6;
  s.at(1, 2) = -0.1;
  s.at(2, 2) = 0.55;
  const double u2 = u_derivative(m, 1.0, 2);
  MomentState d = rhs(m, s, 0);
  CHECK(d.at(0, 2) == doctest::Approx(2 * (-0.1)));
  CHECK(d.at(1, 2) == doctest::Approx(-(1 + u2) * 0.6 + 0.55));
  CHECK(d.at(2, 2) == doctest::Approx(-2 * (1 + u2) * (-0.1)));
}

TEST_CASE("rhs: quantum force on pdot") {
  const OscillatorModel m = quartic24();
  MomentState s = init_state(m, 1.0, 0.0, InitMode::harmonic_vacuum, 2);
  MomentState d = rhs(m, s, 0);
  const double classical = -1.0 - u_derivative(m, 1.0, 1);
  // n = 2 term: (1/2)(hbar/m w) U'''(q) g02 with g02 = 1/2
  CHECK(d.p == doctest::Approx(classical - 0.5 * u_derivative(m, 1.0, 3) * 0.5));
}

TEST_CASE("rhs: order-hbar^0 couples only moments of the same n, linearly") {
  const OscillatorModel m = quartic24();
  const int nmax = 6;
  MomentState zero = init_state(m, 0.8, 0.1, InitMode::harmonic_vacuum, nmax);
  for (auto& g : zero.g) g = 0;
  // single-entry states: the derivative stays within the same n
  std::mt19937_64 rng(1);
  for (int n0 = 2; n0 <= nmax; ++n0) {
    for (int a0 = 0; a0 <= n0; ++a0) {
      MomentState s = zero;
      s.at(a0, n0) = 1.0;
      MomentState d = rhs(m, s, 0);
      for (int n = 2; n <= nmax; ++n)
        for (int a = 0; a <= n; ++a)
          if (n != n0) CHECK(d.moment(a, n) == 0.0);
    }
  }
  // linearity: rhs(alpha x + beta y) = alpha rhs(x) + beta rhs(y) in the moment sector
  std::uniform_real_distribution<double> u(-1, 1);
  MomentState x = zero, y = zero;
  for (auto& g : x.g) g = u(rng);
  for (auto& g : y.g) g = u(rng);
  MomentState xy = zero;
  for (std::size_t i = 0; i < xy.g.size(); ++i) xy.g[i] = 0.3 * x.g[i] - 0.7 * y.g[i];
  MomentState dx = rhs(m, x, 0), dy = rhs(m, y, 0), dxy = rhs(m, xy, 0);
  for (std::size_t i = 0; i < xy.g.size(); ++i)
    CHECK(dxy.g[i] == doctest::Approx(0.3 * dx.g[i] - 0.7 * dy.g[i]).epsilon(1e-12));
}

TEST_CASE("rhs: sqrt(hbar) terms engage the displayed couplings") {
  const OscillatorModel m = quartic24(0.09);
  MomentState s = init_state(m, 1.0, 0.2, InitMode::harmonic_vacuum, 4);
  const MomentState d0 = rhs(m, s, 0);
  const MomentState d1 = rhs(m, s, 1);
  const double u3 = u_derivative(m, 1.0, 3);
  // hand value for the added term in gdot(1,3): a=1, couplings g(0,2)g(0,2) - g(0,4)
  const double add = std::sqrt(0.09) * u3 / 2.0 * (s.moment(0, 2) * s.moment(0, 2) - s.moment(0, 4));
  CHECK(d1.moment(1, 3) - d0.moment(1, 3) == doctest::Approx(add).epsilon(1e-13));
  // order-2 adds the U'''' couplings; for (2,2): -(hbar/6) U'''' 2 [g(0,3)g(1,1)... ] -> uses g(1,4)
  const MomentState d2 = rhs(m, s, 2);
  const double u4 = u_derivative(m, 1.0, 4);
  const double add2 = 0.09 * u4 * 2 / 6.0 *
                      (s.moment(0, 3) * s.moment(1, 1) - s.moment(1, 4) +
                       (2 - 1) * (2 - 2) / 4.0 * s.moment(-1, 0));
  CHECK(d2.moment(2, 2) - d1.moment(2, 2) == doctest::Approx(add2).epsilon(1e-13));
}

TEST_CASE("integrate: harmonic oscillator matches the analytic solution") {
  const OscillatorModel h = harmonic();
  MomentState s0 = init_state(h, 1.0, 0.3, InitMode::harmonic_vacuum, 2);
  HierarchyControls c;
  const double t_end = 10 * 2 * M_PI;
  Trajectory traj = integrate(h, s0, t_end, c);
  REQUIRE(!traj.empty());
  double worst = 0;
  for (const auto& pt : traj.points) {
    const double qa = 1.0 * std::cos(pt.t) + 0.3 * std::sin(pt.t);
    worst = std::max(worst, std::fabs(pt.y[0] - qa));
  }
  CHECK(worst < 1e-9 * t_end);  // generous; acceptance pins the 100-period figure
  // moments stay at the vacuum and uncertainty stays saturated
  for (const auto& pt : traj.points) {
    CHECK(std::fabs(pt.y[2] - 0.5) < 1e-10);
    CHECK(std::fabs(pt.uncertainty - 0.25) < 1e-10);
  }
  CHECK(traj.uncertainty_violations == 0);
}

TEST_CASE("integrate: time reversal returns to the initial state") {
  const OscillatorModel m = quartic24(0.01);
  MomentState s0 = init_state(m, 1.0, 0.0, InitMode::harmonic_vacuum, 4);
  HierarchyControls c;
  const double T = 8.0;
  Trajectory fwd = integrate(m, s0, T, c);
  MomentState mid = unpack_state(fwd.back().y, fwd.back().t, 4);
  mid.t = T;
  HierarchyControls cb = c;
  Trajectory back = integrate(m, mid, 0.0, cb);
  const Eigen::VectorXd y0 = pack_state(s0);
  const Eigen::VectorXd yb = back.back().y;
  for (Eigen::Index i = 0; i < y0.size(); ++i)
    CHECK(std::fabs(yb[i] - y0[i]) < 1e-8);  // ~10x the local tolerance
}

TEST_CASE("integrate: X-crossing reports a failure at the crossing time") {
  const OscillatorModel inverted(1, 1, 1e-4, {0, 0, 0, 0, -1.0});  // X = 1 - 12 q^2
  MomentState s0 = init_state(inverted, 0.0, 1.0, InitMode::harmonic_vacuum, 2);
  HierarchyControls c;
  bool threw = false;
  try {
    integrate(inverted, s0, 5.0, c);
  } catch (const IntegrationFailure& f) {
    threw = true;
    CHECK(f.time > 0.05);
    CHECK(f.time < 1.0);  // classical crossing of |q| = 1/sqrt(12) near t ~ 0.3
    CHECK(!f.partial.empty());
  }
  CHECK(threw);
}

TEST_CASE("integrate: H_Q drift stays small for weak coupling") {
  // conservation breaks only at the next order: drift scales as hbar^2
  const OscillatorModel m = quartic24(1e-5);
  MomentState s0 = init_state(m, 1.0, 0.0, InitMode::harmonic_vacuum, 4);
  HierarchyControls c;
  c.hbar_order = 0;
  Trajectory traj = integrate(m, s0, 10 * 2 * M_PI, c);
  const double h0 = traj.points.front().hq;
  double drift = 0;
  for (const auto& pt : traj.points) drift = std::max(drift, std::fabs(pt.hq - h0));
  CHECK(drift / std::fabs(h0) <= 1e-7);
}

TEST_CASE("integrate: adiabatic closure differs from truncation but stays close") {
  const OscillatorModel m = quartic24(0.01);
  MomentState s0 = init_state(m, 1.0, 0.0, InitMode::adiabatic_vacuum, 2, 2);
  HierarchyControls ct;
  ct.hbar_order = 1;
  Trajectory t1 = integrate(m, s0, 6.0, ct);
  HierarchyControls ca = ct;
  ca.closure = Closure::adiabatic;
  Trajectory t2 = integrate(m, s0, 6.0, ca);
  const double dq = std::fabs(t1.back().y[0] - t2.back().y[0]);
  CHECK(dq > 0.0);       // the closure matters
  CHECK(dq < 1e-3);      // but only at higher order in hbar
}

TEST_CASE("moment state bounds") {
  MomentState s = init_state(harmonic(), 0, 0, InitMode::harmonic_vacuum, 4);
  CHECK(s.moment(0, 0) == 1.0);
  CHECK(s.moment(0, 1) == 0.0);
  CHECK(s.moment(-1, 3) == 0.0);
  CHECK_THROWS_AS(s.moment(0, 6), RangeError);
  CHECK_THROWS_AS(s.at(5, 4), RangeError);
  CHECK_THROWS_AS(init_state(harmonic(), 0, 0, InitMode::harmonic_vacuum, 3), RangeError);
  CHECK_THROWS_AS(rhs(harmonic(), s, 3), RangeError);
}
