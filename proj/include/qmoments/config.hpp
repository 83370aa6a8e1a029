#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qmoments/effective.hpp"
#include "qmoments/hierarchy.hpp"
#include "qmoments/model.hpp"

namespace qmoments {

enum class RunMode { hierarchy, effective, coefficients, verify, compare };

struct RunSpec {
  // [model]
  double m = 1.0;
  double omega = 1.0;
  double hbar = 1.0;
  std::vector<double> u_coeffs;

  // [run]
  RunMode mode = RunMode::hierarchy;
  double q0 = 1.0;
  double p0 = 0.0;
  InitMode init = InitMode::harmonic_vacuum;
  int init_order = 2;        // adiabatic order for adiabatic_vacuum initial data
  int n_max = 2;             // moment truncation N
  int hbar_order = 1;
  int adiabatic_order = 4;   // effective-equation bracket order
  double t_end = 62.831853071795864769;  // ten periods at omega = 1
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double max_step = 0;       // 0 = unlimited
  double fixed_step = 0;     // 0 = adaptive
  Closure closure = Closure::truncate;
  EffectiveForm form = EffectiveForm::reduced;
  CompareMetric metric = CompareMetric::sup;
  unsigned seed = 42;
  int workers = 1;
  int coeff_n = 0;           // coefficients mode: which table (0 = from CLI)
  std::string verify_scope = "all";
  std::string traj_a, traj_b;   // compare mode inputs
  std::vector<double> sweep;    // compare mode: hbar sweep instead of files

  // [output]
  std::string out_path;  // empty = stdout

  OscillatorModel model() const { return OscillatorModel(m, omega, hbar, u_coeffs); }
};

// Parses the INI-style run description ([model]/[run]/[output] sections,
// key = value lines, # or ; comments). ParseError for malformed text,
// ValidationError with the offending key path for semantic violations.
RunSpec parse_config(const std::string& text);

RunSpec load_config(const std::string& path);

}  // namespace qmoments
