#include "qmoments/adiabatic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "qmoments/coefficients.hpp"
#include "qmoments/series.hpp"

namespace qmoments {

namespace {

inline double value_of(double v) { return v; }
inline double value_of(const TSeries& s) { return s.value(); }

inline double pow_any(double x, double e) { return std::pow(x, e); }
inline TSeries pow_any(const TSeries& x, double e) { return pow(x, e); }

// Exact factorial as double (n <= 18 stays below 2^53).
double factd(int n) {
  static const double table[] = {1.,
                                 1.,
                                 2.,
                                 6.,
                                 24.,
                                 120.,
                                 720.,
                                 5040.,
                                 40320.,
                                 362880.,
                                 3628800.,
                                 39916800.,
                                 479001600.,
                                 6227020800.,
                                 87178291200.,
                                 1307674368000.,
                                 20922789888000.,
                                 355687428096000.,
                                 6402373705728000.};
  return table[n];
}

// Vacuum-moment prefactor (n-a)! a! / (2^n ((n-a)/2)! (a/2)!) for even a and n;
// 1 for the order-zero moment; 0 otherwise.
double f00(int n, int a) {
  if (n == 0) return a == 0 ? 1.0 : 0.0;
  if (n < 2 || a < 0 || a > n || a % 2 != 0 || n % 2 != 0) return 0.0;
  return factd(n - a) * factd(a) / (std::pow(2.0, n) * factd((n - a) / 2) * factd(a / 2));
}

double binom_d(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return factd(n) / (factd(k) * factd(n - k));
}

template <class T>
T x_of(const OscillatorModel& mod, const T& q) {
  const double mw2 = mod.mass() * mod.omega() * mod.omega();
  T x = mod.u_derivative_at(q, 2) * (1.0 / mw2) + 1.0;
  if (!(value_of(x) > 0.0))
    throw DomainError("X = 1 + U''/(m omega^2) <= 0 (adiabatic forms undefined)");
  return x;
}

// x^{num4/4}
template <class T>
T xq(const T& x, int num4) {
  return pow_any(x, num4 / 4.0);
}

template <class T>
T zero_like(const T& q) {
  return q * 0.0;
}

// G^{a,n}_{0,0}
template <class T>
T g00_t(const OscillatorModel& mod, int n, int a, const T& q) {
  const double c = f00(n, a);
  if (c == 0.0) return zero_like(q);
  if (n == 0) return zero_like(q) + 1.0;
  return c * xq(x_of(mod, q), 2 * a - n);
}

// G^{a,n}_{0,1}
template <class T>
T g01_t(const OscillatorModel& mod, int n, int a, const T& q, const T& dq) {
  if (n % 2 != 0 || a % 2 != 1 || a < 1 || a > n - 1 || n < 2) return zero_like(q);
  const double w = mod.omega();
  const double c = to_double(detail::c_table_raw(n).at(a));
  const T pre = mod.u_derivative_at(q, 3) * dq * (c / (mod.mass() * w * w * w));
  return pre * xq(x_of(mod, q), 2 * a - n - 6);
}

// G^{0,n}_{0,2}
template <class T>
T g0n02_t(const OscillatorModel& mod, int n, const T& q, const T& dq, const T& ddq) {
  const auto [apn, bpn] = detail::ap_bp_raw(n);
  const double m = mod.mass(), w = mod.omega();
  const T u3 = mod.u_derivative_at(q, 3);
  const T x = x_of(mod, q);
  const T p = (u3 * ddq + mod.u_derivative_at(q, 4) * (dq * dq)) * (1.0 / (m * std::pow(w, 4)));
  const T s = u3 * dq;
  const T q2 = s * s * (1.0 / (4.0 * m * m * std::pow(w, 6)));
  return to_double(apn) * (p * xq(x, -(n + 8))) + to_double(bpn) * (q2 * xq(x, -(n + 12)));
}

// G^{a,n}_{0,2}
template <class T>
T g02_t(const OscillatorModel& mod, int n, int a, const T& q, const T& dq, const T& ddq) {
  if (n % 2 != 0 || n < 2 || a < 0 || a > n || a % 2 != 0) return zero_like(q);
  const double m = mod.mass(), w = mod.omega();
  const auto [a_tab, b_tab] = detail::ab_tables_raw(n);
  const T x = x_of(mod, q);
  const T u3 = mod.u_derivative_at(q, 3);
  const T p = (u3 * ddq + mod.u_derivative_at(q, 4) * (dq * dq)) * (1.0 / (m * std::pow(w, 4)));
  const T s = u3 * dq;
  const T q2 = s * s * (1.0 / (4.0 * m * m * std::pow(w, 6)));
  const double wa = binom_d(n / 2, a / 2) / binom_d(n, a);
  T r = to_double(a_tab.at(a)) * (p * xq(x, 2 * a - n - 8)) +
        to_double(b_tab.at(a)) * (q2 * xq(x, 2 * a - n - 12));
  return r + wa * (xq(x, 2 * a) * g0n02_t(mod, n, q, dq, ddq));
}

// G^{a,n}_{1,0}
template <class T>
T g10_t(const OscillatorModel& mod, int n, int a, const T& q) {
  if (n % 2 != 1 || n < 3 || a % 2 != 0 || a < 0 || a > n - 1) return zero_like(q);
  const double m = mod.mass(), w = mod.omega();
  const double d = to_double(detail::d_table_raw(n, 0).at(a));
  const T pre = mod.u_derivative_at(q, 3) * (d / (std::pow(m, 1.5) * std::pow(w, 2.5)));
  return pre * xq(x_of(mod, q), 2 * a - n - 5);
}

// G^{a,n}_{1,1}: same structure as g10 with the shifted inhomogeneity table.
template <class T>
T g11_t(const OscillatorModel& mod, int n, int a, const T& q) {
  if (n % 2 == 0) return zero_like(q);
  if (a % 2 != 0)
    throw UnsupportedMoment("moment (1,1) with odd a and odd n is not solved by the expansion");
  if (a < 0 || a > n - 1) return zero_like(q);
  const double m = mod.mass(), w = mod.omega();
  const double d = to_double(detail::d_table_raw(n, 3).at(a));
  const T pre = mod.u_derivative_at(q, 3) * (d / (std::pow(m, 1.5) * std::pow(w, 2.5)));
  return pre * xq(x_of(mod, q), 2 * a - n - 5);
}

// G^{0,2}_{0,4}: the fourth-adiabatic-order piece of the position variance.
template <class T>
T g02_04_t(const OscillatorModel& mod, const T& q, const T& dq, const T& ddq, const T& dddq,
           const T& ddddq) {
  const double m = mod.mass(), w = mod.omega();
  const T x = x_of(mod, q);
  const T u3 = mod.u_derivative_at(q, 3);
  const T u4 = mod.u_derivative_at(q, 4);
  const T u5 = mod.u_derivative_at(q, 5);
  const T u6 = mod.u_derivative_at(q, 6);
  const T s = u3 * dq;   // U''' qdot
  const T dq2 = dq * dq;

  const T top = u3 * ddddq + 4.0 * (u4 * (dddq * dq)) + 3.0 * (u4 * (ddq * ddq)) +
                6.0 * (u5 * (dq2 * ddq)) + u6 * (dq2 * dq2);
  const T pair = u4 * dq2 + u3 * ddq;
  const T mid = u3 * dddq + 3.0 * (u4 * (ddq * dq)) + u5 * (dq2 * dq);

  T r = (-1.0 / (64.0 * m * std::pow(w, 6))) * (top * xq(x, -14));
  r += ((21.0 / (256.0 * m * m * std::pow(w, 8))) * (pair * pair) +
        (7.0 / (64.0 * m * m * std::pow(w, 8))) * (s * mid)) *
       xq(x, -18);
  r += (-231.0 / (512.0 * std::pow(m, 3) * std::pow(w, 10))) * ((s * s) * pair) * xq(x, -22);
  r += (1155.0 / (4096.0 * std::pow(m, 4) * std::pow(w, 12))) * ((s * s) * (s * s)) * xq(x, -26);
  return r;
}

void check_na(int n, int a, const char* who) {
  if (n < 2 || n > kMaxMomentOrder)
    throw RangeError(std::string(who) + ": n out of [2, " + std::to_string(kMaxMomentOrder) + "]");
  if (a < 0 || a > n) throw RangeError(std::string(who) + ": a out of [0, n]");
}

}  // namespace

bool order_supported(ExpansionOrder order, int n, int a) {
  const auto [e, i] = order;
  if (e == 0 && (i == 0 || i == 1 || i == 2)) return true;
  if (e == 0 && i == 3) return !(a % 2 == 1 && n % 2 == 0);
  if (e == 0 && i == 4) return n == 2 && a == 0;
  if (e == 1 && i == 0) return true;
  if (e == 1 && i == 1) return !(a % 2 == 1 && n % 2 == 1);
  return false;
}

double moment_00(const OscillatorModel& model, int n, int a, double q) {
  check_na(n, a, "moment_00");
  return g00_t(model, n, a, q);
}

double moment_01(const OscillatorModel& model, int n, int a, const Jet& jet) {
  check_na(n, a, "moment_01");
  jet.require_order(1);
  return g01_t(model, n, a, jet.q(), jet.dq());
}

double moment_02(const OscillatorModel& model, int n, int a, const Jet& jet) {
  check_na(n, a, "moment_02");
  if (n % 2 != 0) {
    (void)stiffness(model, jet.q());  // malformed X still errors
    return 0.0;                       // odd n vanishes at every adiabatic order
  }
  jet.require_order(2);
  return g02_t(model, n, a, jet.q(), jet.dq(), jet.ddq());
}

double moment_03(const OscillatorModel& model, int n, int a) {
  check_na(n, a, "moment_03");
  (void)model;
  if (n % 2 == 1 || a % 2 == 0) return 0.0;
  throw UnsupportedMoment("moment (0,3) with odd a and even n is not derived in closed form");
}

double moment_10(const OscillatorModel& model, int n, int a, double q) {
  check_na(n, a, "moment_10");
  return g10_t(model, n, a, q);
}

double moment_11(const OscillatorModel& model, int n, int a, const Jet& jet) {
  check_na(n, a, "moment_11");
  jet.require_order(1);
  return g11_t(model, n, a, jet.q());
}

double moment(const OscillatorModel& model, int n, int a, ExpansionOrder order, const Jet& jet) {
  if (order.e == 0 && order.i == 0) return moment_00(model, n, a, jet.q());
  if (order.e == 0 && order.i == 1) return moment_01(model, n, a, jet);
  if (order.e == 0 && order.i == 2) return moment_02(model, n, a, jet);
  if (order.e == 0 && order.i == 3) return moment_03(model, n, a);
  if (order.e == 0 && order.i == 4) {
    if (!(n == 2 && a == 0))
      throw UnsupportedMoment("fourth adiabatic order is available only for (a,n) = (0,2)");
    jet.require_order(4);
    return g02_04_t(model, jet.q(), jet.dq(), jet.ddq(), jet.dddq(), jet.ddddq());
  }
  if (order.e == 1 && order.i == 0) return moment_10(model, n, a, jet.q());
  if (order.e == 1 && order.i == 1) return moment_11(model, n, a, jet);
  throw UnsupportedMoment("expansion order (" + std::to_string(order.e) + "," +
                          std::to_string(order.i) + ") is outside the supported grid");
}

double adiabatic_stack(const OscillatorModel& model, int n, int a, const Jet& jet,
                       int adiabatic_order) {
  if (n < 2 || n > detail::kCoeffLimit || a < 0 || a > n)
    throw RangeError("adiabatic_stack: index out of range");
  const double sq_hbar = std::sqrt(model.hbar());
  double v = g00_t(model, n, a, jet.q());
  if (adiabatic_order >= 1) v += g01_t(model, n, a, jet.q(), jet.dq());
  if (adiabatic_order >= 2) {
    jet.require_order(2);
    v += g02_t(model, n, a, jet.q(), jet.dq(), jet.ddq());
  }
  v += sq_hbar * g10_t(model, n, a, jet.q());
  if (adiabatic_order >= 1 && !(n % 2 == 1 && a % 2 == 1))
    v += sq_hbar * g11_t(model, n, a, jet.q());
  return v;
}

double g02_stack(const OscillatorModel& model, const Jet& jet, int hbar_order,
                 int adiabatic_order) {
  if (hbar_order < 0 || hbar_order > 2) throw RangeError("g02_stack: hbar_order must be 0, 1 or 2");
  if (adiabatic_order < 0 || adiabatic_order > 4)
    throw RangeError("g02_stack: adiabatic_order must be in [0, 4]");
  jet.require_order(std::max(1, adiabatic_order));
  double sum = g00_t(model, 2, 0, jet.q());
  // (0,1) and (0,3) vanish for (a,n) = (0,2); every sqrt(hbar) term with
  // i <= 4 vanishes as well, so hbar_order does not change the value here.
  if (adiabatic_order >= 2) sum += g02_t(model, 2, 0, jet.q(), jet.dq(), jet.ddq());
  if (adiabatic_order >= 4)
    sum += g02_04_t(model, jet.q(), jet.dq(), jet.ddq(), jet.dddq(), jet.ddddq());
  return sum;
}

SecondMomentBlock second_moment_block(const OscillatorModel& model, const Jet& jet) {
  jet.require_order(2);
  const double m = model.mass(), w = model.omega();
  const double q = jet.q(), dq = jet.dq();
  const double x = stiffness(model, q);
  const double u3 = u_derivative(model, q, 3);
  const double y = g02_t(model, 2, 0, q, dq, jet.ddq());
  const double s2 = u3 * dq * u3 * dq;
  SecondMomentBlock b;
  b.x = x;
  b.y = y;
  b.g02 = 0.5 * std::pow(x, -0.5) + y;
  b.g12 = -u3 * dq / (8.0 * m * w * w * w) * std::pow(x, -1.5);
  b.g22 = (0.5 * std::pow(x, -0.5) - y + s2 / (32.0 * m * m * std::pow(w, 6)) * std::pow(x, -3.5)) * x;
  return b;
}

double uncertainty_value(const SecondMomentBlock& block) {
  return block.g02 * block.g22 - block.g12 * block.g12;
}

double uncertainty_value_reduced(const OscillatorModel& model, const Jet& jet) {
  const SecondMomentBlock b = second_moment_block(model, jet);
  const double u3 = u_derivative(model, jet.q(), 3);
  const double s2 = u3 * jet.dq() * u3 * jet.dq();
  const double m = model.mass(), w = model.omega();
  return 0.25 - b.x * b.y * b.y +
         s2 / (32.0 * m * m * std::pow(w, 6)) * std::pow(b.x, -2.5) * b.y;
}

double zero_point(const OscillatorModel& model, const Jet& jet) {
  const SecondMomentBlock b = second_moment_block(model, jet);
  return b.g02 + b.g22;
}

double zero_point_closed(const OscillatorModel& model, const Jet& jet) {
  const SecondMomentBlock b = second_moment_block(model, jet);
  const double u3 = u_derivative(model, jet.q(), 3);
  const double s2 = u3 * jet.dq() * u3 * jet.dq();
  const double m = model.mass(), w = model.omega();
  return 0.5 * std::pow(b.x, -0.5) * (1.0 + b.x) + b.y * (1.0 - b.x) +
         s2 / (32.0 * m * m * std::pow(w, 6)) * std::pow(b.x, -2.5);
}

double experimental_g22_h2_static(const OscillatorModel& model, double q, double g02_20) {
  const double m = model.mass(), w = model.omega();
  const double s = 1.0 - u_derivative(model, q, 2) / (m * w * w);
  if (s == 0.0) throw DomainError("experimental n=2 relation degenerates at U'' = m omega^2");
  const double u3 = u_derivative(model, q, 3);
  const double u4 = u_derivative(model, q, 4);
  return s * g02_20 - u3 * u3 / (24.0 * std::pow(m, 3) * std::pow(w, 5)) / (s * s) +
         u4 / (8.0 * m * m * std::pow(w, 3)) / s;
}

std::vector<SampleJet> make_sample_jets(const OscillatorModel& model, int count, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uq(-1.25, 1.25);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  std::vector<SampleJet> jets;
  jets.reserve(count);
  while (static_cast<int>(jets.size()) < count) {
    SampleJet j;
    j.d[0] = uq(rng);
    const double x =
        1.0 + u_derivative(model, j.d[0], 2) / (model.mass() * model.omega() * model.omega());
    if (x < 0.1) continue;  // keep a margin away from the breakdown point
    for (int k = 1; k < 6; ++k) j.d[k] = ud(rng);
    jets.push_back(j);
  }
  return jets;
}

namespace {

// Signed terms that should sum to zero; residual is |sum| relative to the
// largest participating term.
struct ZeroSum {
  double sum = 0, amax = 0;
  void add(double t) {
    sum += t;
    amax = std::max(amax, std::fabs(t));
  }
  double rel() const { return amax > 0 ? std::fabs(sum) / amax : 0.0; }
};

struct SuiteAcc {
  ResidualReport rep;
  std::vector<ResidualItem> eqmax;
  void record(const std::string& eq, int n, int a, double r) {
    ++rep.checks;
    auto it = std::find_if(eqmax.begin(), eqmax.end(),
                           [&](const ResidualItem& x) { return x.equation == eq; });
    if (it == eqmax.end()) {
      eqmax.push_back({eq, n, a, r});
    } else if (r > it->residual) {
      *it = {eq, n, a, r};
    }
    if (r > rep.max_residual) {
      rep.max_residual = r;
      rep.worst = {eq, n, a, r};
    }
  }
};

}  // namespace

ResidualReport residual_suite(const OscillatorModel& model, int max_n,
                              const std::vector<SampleJet>& jets) {
  if (max_n < 2 || max_n > kMaxMomentOrder) throw RangeError("residual_suite: bad max_n");
  const double m = model.mass(), w = model.omega();
  SuiteAcc acc;

  for (const SampleJet& jet : jets) {
    TSeries q, dq, ddq, dddq, ddddq;
    double x, xdot, u2, u3;
    try {
      q = TSeries::from_derivatives(jet.d.data(), 6);
      dq = q.time_derivative();
      ddq = dq.time_derivative();
      dddq = ddq.time_derivative();
      ddddq = dddq.time_derivative();
      x = stiffness(model, jet.q());
      u2 = u_derivative(model, jet.q(), 2);
      u3 = u_derivative(model, jet.q(), 3);
      xdot = u3 * jet.d[1] / (m * w * w);
    } catch (const DomainError&) {
      ++acc.rep.skipped;
      continue;
    }

    for (int n = 2; n <= max_n; ++n) {
      // Zeroth order in both expansions: the static algebraic equation.
      for (int a = 0; a <= n; ++a) {
        ZeroSum z;
        z.add(-a * w * g00_t(model, n, a - 1, jet.q()));
        z.add((n - a) * w * g00_t(model, n, a + 1, jet.q()));
        z.add(-u2 * a / (m * w) * g00_t(model, n, a - 1, jet.q()));
        acc.record("adiabatic0_static", n, a, z.rel());
      }

      // First adiabatic order: d/dt G00 equals the same combination of G01.
      for (int a = 0; a <= n; ++a) {
        ZeroSum z;
        z.add(-g00_t(model, n, a, q).deriv(1));
        z.add(-a * w * value_of(g01_t(model, n, a - 1, q, dq)));
        z.add((n - a) * w * value_of(g01_t(model, n, a + 1, q, dq)));
        z.add(-u2 * a / (m * w) * value_of(g01_t(model, n, a - 1, q, dq)));
        acc.record("adiabatic1_flow", n, a, z.rel());
      }

      if (n % 2 == 0) {
        // Second adiabatic order, derivative form: d/dt G01 = -a w X G02(a-1) + (n-a) w G02(a+1).
        for (int a = 0; a <= n; ++a) {
          ZeroSum z;
          z.add(-g01_t(model, n, a, q, dq).deriv(1));
          z.add(-a * w * x * value_of(g02_t(model, n, a - 1, q, dq, ddq)));
          z.add((n - a) * w * value_of(g02_t(model, n, a + 1, q, dq, ddq)));
          acc.record("adiabatic2_flow", n, a, z.rel());
        }

        // Second adiabatic order, ascending display form (odd equation index).
        const auto ctab = detail::c_table_raw(n);
        const double u4 = u_derivative(model, jet.q(), 4);
        const double p2 = (u3 * jet.d[2] + u4 * jet.d[1] * jet.d[1]);
        const double s2 = u3 * jet.d[1] * u3 * jet.d[1];
        for (int a = 1; a < n; a += 2) {
          const double c = to_double(ctab.at(a));
          ZeroSum z;
          z.add(value_of(g02_t(model, n, a + 1, q, dq, ddq)));
          z.add(-static_cast<double>(a) / (n - a) * x *
                value_of(g02_t(model, n, a - 1, q, dq, ddq)));
          z.add(-c / ((n - a) * m * std::pow(w, 4)) *
                (p2 * std::pow(x, (2 * a - n - 6) / 4.0)));
          z.add(-c / ((n - a) * m * std::pow(w, 4)) *
                (s2 * (2 * a - n - 6) / (4.0 * m * w * w) * std::pow(x, (2 * a - n - 10) / 4.0)));
          acc.record("adiabatic2_ascending", n, a, z.rel());
        }

        // Third-order consistency sum over even a.
        {
          ZeroSum z;
          for (int a = 0; a <= n; a += 2)
            z.add(binom_d(n / 2, a / 2) * std::pow(x, (n - a) / 2.0) *
                  g02_t(model, n, a, q, dq, ddq).deriv(1));
          acc.record("adiabatic3_consistency", n, 0, z.rel());
        }
      }

      // O(sqrt(hbar)), zeroth adiabatic order: the full displayed equation.
      for (int a = 0; a <= n; ++a) {
        ZeroSum z;
        z.add(-a * w * g10_t(model, n, a - 1, jet.q()));
        z.add((n - a) * w * g10_t(model, n, a + 1, jet.q()));
        z.add(-u2 * a / (m * w) * g10_t(model, n, a - 1, jet.q()));
        const double pref = u3 * a / (2.0 * std::pow(m * w, 1.5));
        z.add(pref * g00_t(model, 2, 0, jet.q()) * g00_t(model, n - 1, a - 1, jet.q()));
        z.add(-pref * g00_t(model, n + 1, a - 1, jet.q()));
        z.add(pref * (a - 1) * (a - 2) / 12.0 * g00_t(model, n - 3, a - 3, jet.q()));
        acc.record("sqrt_hbar_static", n, a, z.rel());
      }
    }

    // Fourth-order consistency for the (0,2) moment:
    // 2 X dG04/dt + Xdot G04 + (1/(2 w^2)) d^3/dt^3 G02 = 0.
    {
      const TSeries g04 = g02_04_t(model, q, dq, ddq, dddq, ddddq);
      const TSeries g02s = g02_t(model, 2, 0, q, dq, ddq);
      ZeroSum z;
      z.add(2.0 * x * g04.deriv(1));
      z.add(xdot * g04.value());
      z.add(g02s.deriv(3) / (2.0 * w * w));
      acc.record("adiabatic4_consistency", 2, 0, z.rel());
    }
  }

  acc.rep.by_equation = acc.eqmax;
  return acc.rep;
}

}  // namespace qmoments
