#include "qmoments/runner.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <thread>

#include "qmoments/adiabatic.hpp"
#include "qmoments/coefficients.hpp"
#include "qmoments/csv.hpp"
#include "qmoments/effective.hpp"
#include "qmoments/verify.hpp"

namespace qmoments {

namespace {

// Output sink: file when a path is configured, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw Error("cannot open output file: " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void print_coeff_table(std::ostream& os, const CoeffTable& t) {
  for (const auto& [a, v] : t.c)
    os << "C[" << a << "," << t.n << "]=" << to_fraction_string(v) << "\n";
  for (const auto& [a, v] : t.a_tab)
    os << "A[" << a << "," << t.n << "]=" << to_fraction_string(v) << "\n";
  for (const auto& [a, v] : t.b_tab)
    os << "B[" << a << "," << t.n << "]=" << to_fraction_string(v) << "\n";
  os << "A'[" << t.n << "]=" << to_fraction_string(t.a_prime) << "\n";
  os << "B'[" << t.n << "]=" << to_fraction_string(t.b_prime) << "\n";
}

HierarchyControls hierarchy_controls(const RunSpec& spec) {
  HierarchyControls c;
  c.ode.rel_tol = spec.rel_tol;
  c.ode.abs_tol = spec.abs_tol;
  if (spec.max_step > 0) c.ode.max_step = spec.max_step;
  c.ode.fixed_step = spec.fixed_step;
  c.hbar_order = spec.hbar_order;
  c.closure = spec.closure;
  return c;
}

EffectiveControls effective_controls(const RunSpec& spec) {
  EffectiveControls c;
  c.ode.rel_tol = spec.rel_tol;
  c.ode.abs_tol = spec.abs_tol;
  if (spec.max_step > 0) c.ode.max_step = spec.max_step;
  c.ode.fixed_step = spec.fixed_step;
  c.adiabatic_order = spec.adiabatic_order;
  return c;
}

int run_hierarchy(const RunSpec& spec, std::ostream& log) {
  const OscillatorModel model = spec.model();
  const MomentState s0 =
      init_state(model, spec.q0, spec.p0, spec.init, spec.n_max, spec.init_order);
  try {
    const Trajectory traj = integrate(model, s0, spec.t_end, hierarchy_controls(spec));
    Sink sink(spec.out_path);
    write_trajectory_csv(sink.stream(), traj);
    log << "hierarchy: " << traj.points.size() << " samples to t = " << spec.t_end
        << ", min uncertainty " << traj.min_uncertainty;
    if (traj.uncertainty_violations > 0)
      log << " (WARNING: " << traj.uncertainty_violations
          << " uncertainty violations, first at t = " << traj.first_violation_time << ")";
    log << "\n";
    return kExitOk;
  } catch (const IntegrationFailure& f) {
    log << "hierarchy: FAILED at t = " << f.time << ": " << f.reason << "\n";
    if (!spec.out_path.empty() && !f.partial.empty()) {
      write_trajectory_csv(spec.out_path, f.partial);
      log << "partial trajectory written to " << spec.out_path << "\n";
    }
    return kExitIntegration;
  }
}

int run_effective(const RunSpec& spec, std::ostream& log) {
  const OscillatorModel model = spec.model();
  try {
    const Trajectory traj = integrate_effective(model, spec.q0, spec.p0, spec.t_end,
                                                effective_controls(spec), spec.form);
    Sink sink(spec.out_path);
    write_trajectory_csv(sink.stream(), traj);
    log << "effective: " << traj.points.size() << " samples to t = " << spec.t_end << "\n";
    return kExitOk;
  } catch (const IntegrationFailure& f) {
    log << "effective: FAILED at t = " << f.time << ": " << f.reason << "\n";
    return kExitIntegration;
  } catch (const SingularLeadingTerm& e) {
    log << "effective: FAILED: " << e.what() << "\n";
    return kExitIntegration;
  }
}

// hbar sweep: hierarchy vs reduced effective trajectory gap per hbar.
int run_compare_sweep(const RunSpec& spec, std::ostream& log) {
  const std::size_t count = spec.sweep.size();
  std::vector<double> gaps(count, 0.0);
  std::vector<std::string> errors(count);

  auto one = [&](std::size_t i) {
    try {
      const OscillatorModel model =
          OscillatorModel(spec.m, spec.omega, spec.sweep[i], spec.u_coeffs);
      const MomentState s0 =
          init_state(model, spec.q0, spec.p0, spec.init, spec.n_max, spec.init_order);
      const Trajectory h = integrate(model, s0, spec.t_end, hierarchy_controls(spec));
      const Trajectory e = integrate_effective(model, spec.q0, spec.p0, spec.t_end,
                                               effective_controls(spec), EffectiveForm::reduced);
      gaps[i] = compare(to_qpath(h), to_qpath(e), spec.metric);
    } catch (const Error& err) {
      errors[i] = err.what();
    }
  };

  if (spec.workers > 1) {
    std::vector<std::thread> pool;
    for (int w = 0; w < spec.workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < count; i += spec.workers) one(i);
      });
    for (auto& th : pool) th.join();
  } else {
    for (std::size_t i = 0; i < count; ++i) one(i);
  }

  for (std::size_t i = 0; i < count; ++i)
    if (!errors[i].empty()) {
      log << "compare sweep: hbar = " << spec.sweep[i] << " failed: " << errors[i] << "\n";
      return kExitIntegration;
    }

  const double slope = loglog_slope(spec.sweep, gaps);
  Sink sink(spec.out_path);
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s,%.17g,%.6g\n",
                spec.metric == CompareMetric::sup ? "sup" : "l2", gaps.back(), slope);
  sink.stream() << buf;
  return kExitOk;
}

int run_compare(const RunSpec& spec, std::ostream& log) {
  if (!spec.sweep.empty()) return run_compare_sweep(spec, log);
  const QPath a = read_qpath_csv(spec.traj_a);
  const QPath b = read_qpath_csv(spec.traj_b);
  const double value = compare(a, b, spec.metric);
  Sink sink(spec.out_path);
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s,%.17g,nan\n",
                spec.metric == CompareMetric::sup ? "sup" : "l2", value);
  sink.stream() << buf;
  return kExitOk;
}

}  // namespace

int run(const RunSpec& spec, std::ostream& log) {
  try {
    switch (spec.mode) {
      case RunMode::hierarchy:
        return run_hierarchy(spec, log);
      case RunMode::effective:
        return run_effective(spec, log);
      case RunMode::coefficients: {
        Sink sink(spec.out_path);
        print_coeff_table(sink.stream(), coeff_table(spec.coeff_n));
        return kExitOk;
      }
      case RunMode::verify: {
        // Without an anharmonicity the residual checks are vacuous; fall back
        // to the built-in quartic default.
        const std::optional<OscillatorModel> model =
            spec.u_coeffs.empty() ? std::nullopt : std::make_optional(spec.model());
        const VerifyReport rep = verify_all(model, spec.verify_scope, spec.seed);
        Sink sink(spec.out_path);
        print_report(sink.stream(), rep);
        return rep.all_pass() ? kExitOk : kExitVerification;
      }
      case RunMode::compare:
        return run_compare(spec, log);
    }
  } catch (const ParseError& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ValidationError& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const RangeError& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace qmoments
