#include "qmoments/hierarchy.hpp"

#include <cmath>
#include <string>

#include "qmoments/adiabatic.hpp"

namespace qmoments {

namespace {

void check_state(const MomentState& s) {
  if (s.n_max < 2 || s.n_max > kMaxMomentOrder || s.n_max % 2 != 0)
    throw RangeError("moment state: n_max must be even in [2, " +
                     std::to_string(kMaxMomentOrder) + "]");
  if (static_cast<int>(s.g.size()) != MomentState::count(s.n_max))
    throw RangeError("moment state: wrong number of moment entries");
}

}  // namespace

double MomentState::moment(int a, int n) const {
  if (n == 0) return a == 0 ? 1.0 : 0.0;
  if (n == 1) return 0.0;
  if (n < 0 || a < 0 || a > n) return 0.0;
  if (n > n_max) throw RangeError("moment above truncation order requested from state");
  return g[index(a, n)];
}

double& MomentState::at(int a, int n) {
  if (n < 2 || n > n_max || a < 0 || a > n) throw RangeError("moment index out of range");
  return g[index(a, n)];
}

MomentState convert(const OscillatorModel& model, const MomentState& state, MomentForm target) {
  MomentState out = state;
  const double mw = model.mass() * model.omega();
  for (int n = 2; n <= state.n_max; ++n) {
    for (int a = 0; a <= n; ++a) {
      // dimensionless = hbar^{-n/2} (m omega)^{n/2 - a} * dimensionful
      const double factor = std::pow(model.hbar(), -0.5 * n) * std::pow(mw, 0.5 * n - a);
      const int i = MomentState::index(a, n);
      out.g[i] = (target == MomentForm::dimensionless) ? state.g[i] * factor : state.g[i] / factor;
    }
  }
  return out;
}

MomentState init_state(const OscillatorModel& model, double q0, double p0, InitMode mode,
                       int n_max, int adiabatic_order) {
  MomentState s;
  s.n_max = n_max;
  s.q = q0;
  s.p = p0;
  s.g.assign(MomentState::count(n_max), 0.0);
  check_state(s);
  if (mode == InitMode::harmonic_vacuum) {
    const OscillatorModel harm(model.mass(), model.omega(), model.hbar());
    for (int n = 2; n <= n_max; ++n)
      for (int a = 0; a <= n; ++a) s.at(a, n) = (n % 2 || a % 2) ? 0.0 : moment_00(harm, n, a, 0.0);
  } else {
    (void)stiffness(model, q0);
    const Jet jet = classical_jet(model, q0, p0 / model.mass(), 2);
    for (int n = 2; n <= n_max; ++n)
      for (int a = 0; a <= n; ++a) s.at(a, n) = adiabatic_stack(model, n, a, jet, adiabatic_order);
  }
  return s;
}

double hq(const OscillatorModel& model, const MomentState& state) {
  check_state(state);
  const double m = model.mass(), w = model.omega(), hbar = model.hbar();
  double h = state.p * state.p / (2 * m) + 0.5 * m * w * w * state.q * state.q +
             u_derivative(model, state.q, 0) +
             0.5 * hbar * w * (state.moment(0, 2) + state.moment(2, 2));
  double fact = 1.0;
  for (int n = 2; n <= state.n_max; ++n) {
    fact *= n;  // running n!
    h += std::pow(hbar / (m * w), 0.5 * n) / fact * u_derivative(model, state.q, n) *
         state.moment(0, n);
  }
  return h;
}

namespace {

struct RhsContext {
  const OscillatorModel& model;
  int hbar_order;
  Closure closure;
};

// Moment lookup with the closure rule for entries above the truncation.
double lookup(const RhsContext& ctx, const MomentState& s, const Jet& jet, int a, int n) {
  if (n <= s.n_max) return s.moment(a, n);
  if (ctx.closure == Closure::truncate) return 0.0;
  return adiabatic_stack(ctx.model, n, a, jet, 2);
}

void rhs_into(const RhsContext& ctx, const MomentState& s, MomentState& out) {
  const OscillatorModel& model = ctx.model;
  const double m = model.mass(), w = model.omega(), hbar = model.hbar();
  const double u2 = u_derivative(model, s.q, 2);
  const double u3 = u_derivative(model, s.q, 3);
  const double u4 = u_derivative(model, s.q, 4);
  const double sq_hbar = std::sqrt(hbar);

  out.t = s.t;
  out.n_max = s.n_max;
  out.q = s.p / m;

  double force = -m * w * w * s.q - u_derivative(model, s.q, 1);
  double fact = 1.0;
  for (int n = 2; n <= s.n_max; ++n) {
    fact *= n;
    force -= std::pow(hbar / (m * w), 0.5 * n) / fact * u_derivative(model, s.q, n + 1) *
             s.moment(0, n);
  }
  out.p = force;

  const Jet jet = (ctx.closure == Closure::adiabatic && s.n_max >= 2)
                      ? classical_jet(model, s.q, s.p / m, 2)
                      : Jet(s.q, s.p / m);
  const double c1 = u3 / (2.0 * std::pow(m * w, 1.5));
  const double c2 = u4 / (6.0 * std::pow(m * w, 2.0));

  for (int n = 2; n <= s.n_max; ++n) {
    for (int a = 0; a <= n; ++a) {
      double g = -a * w * s.moment(a - 1, n) + (n - a) * w * s.moment(a + 1, n) -
                 u2 * a / (m * w) * s.moment(a - 1, n);
      if (ctx.hbar_order >= 1 && a >= 1) {
        g += sq_hbar * a * c1 *
             (s.moment(0, 2) * s.moment(a - 1, n - 1) - lookup(ctx, s, jet, a - 1, n + 1) +
              (a - 1) * (a - 2) / 12.0 * s.moment(a - 3, n - 3));
      }
      if (ctx.hbar_order >= 2 && a >= 1) {
        g += hbar * a * c2 *
             (s.moment(0, 3) * s.moment(a - 1, n - 1) - lookup(ctx, s, jet, a - 1, n + 2) +
              (a - 1) * (a - 2) / 4.0 * s.moment(a - 3, n - 2));
      }
      out.at(a, n) = g;
    }
  }
}

}  // namespace

MomentState rhs(const OscillatorModel& model, const MomentState& state, int hbar_order,
                Closure closure) {
  check_state(state);
  if (hbar_order < 0 || hbar_order > 2) throw RangeError("rhs: hbar_order must be 0, 1 or 2");
  MomentState out = state;
  RhsContext ctx{model, hbar_order, closure};
  rhs_into(ctx, state, out);
  return out;
}

Eigen::VectorXd pack_state(const MomentState& s) {
  Eigen::VectorXd y(2 + s.g.size());
  y[0] = s.q;
  y[1] = s.p;
  for (std::size_t i = 0; i < s.g.size(); ++i) y[2 + i] = s.g[i];
  return y;
}

MomentState unpack_state(const Eigen::VectorXd& y, double t, int n_max) {
  MomentState s;
  s.t = t;
  s.n_max = n_max;
  s.q = y[0];
  s.p = y[1];
  s.g.assign(y.data() + 2, y.data() + y.size());
  return s;
}

std::vector<std::string> state_columns(int n_max) {
  std::vector<std::string> cols{"q", "p"};
  for (int n = 2; n <= n_max; ++n)
    for (int a = 0; a <= n; ++a)
      cols.push_back("G_" + std::to_string(a) + "_" + std::to_string(n));
  return cols;
}

Trajectory integrate(const OscillatorModel& model, const MomentState& state0, double t_end,
                     const HierarchyControls& controls) {
  check_state(state0);
  const int n_max = state0.n_max;
  RhsContext ctx{model, controls.hbar_order, controls.closure};
  if (ctx.hbar_order < 0 || ctx.hbar_order > 2)
    throw RangeError("integrate: hbar_order must be 0, 1 or 2");

  MomentState scratch = state0;
  MomentState dscratch = state0;
  auto odefun = [&](double t, const Eigen::VectorXd& y, Eigen::VectorXd& dydt) {
    scratch = unpack_state(y, t, n_max);
    (void)stiffness(model, scratch.q);  // raises DomainError past the breakdown point
    rhs_into(ctx, scratch, dscratch);
    dydt = pack_state(dscratch);
  };

  Trajectory traj;
  traj.columns = state_columns(n_max);

  long accepted = 0;
  bool aborted_on_uncertainty = false;
  auto record = [&](double t, const Eigen::VectorXd& y) -> bool {
    if (!y.allFinite()) throw IntegrationFailure(t, "non-finite state");
    MomentState s = unpack_state(y, t, n_max);
    TrajectoryPoint pt;
    pt.t = t;
    pt.y = y;
    pt.hq = hq(model, s);
    pt.uncertainty =
        s.moment(0, 2) * s.moment(2, 2) - s.moment(1, 2) * s.moment(1, 2);
    pt.x = stiffness(model, s.q);
    traj.min_uncertainty = std::min(traj.min_uncertainty, pt.uncertainty);
    if (pt.uncertainty < 0.25 - controls.uncertainty_tol) {
      if (traj.uncertainty_violations == 0) traj.first_violation_time = t;
      ++traj.uncertainty_violations;
    }
    if (controls.record_stride <= 1 || accepted % controls.record_stride == 0 ||
        t == t_end)
      traj.points.push_back(std::move(pt));
    ++accepted;
    if (controls.abort_on_uncertainty && traj.uncertainty_violations > 0) {
      aborted_on_uncertainty = true;
      return false;
    }
    return true;
  };

  Eigen::VectorXd y = pack_state(state0);
  try {
    dopri5_integrate(odefun, state0.t, t_end, y, controls.ode, record);
  } catch (const DomainError& e) {
    const double t_fail = traj.empty() ? state0.t : traj.back().t;
    throw IntegrationFailure(t_fail, e.what(), std::move(traj));
  } catch (IntegrationFailure& f) {
    f.partial = std::move(traj);
    throw;
  }
  if (aborted_on_uncertainty) {
    const double t_abort = traj.back().t;
    throw IntegrationFailure(t_abort, "uncertainty relation violated beyond tolerance",
                             std::move(traj));
  }
  return traj;
}

}  // namespace qmoments
