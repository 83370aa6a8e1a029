#include "qmoments/verify.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

#include "qmoments/adiabatic.hpp"
#include "qmoments/coefficients.hpp"
#include "qmoments/effective.hpp"

namespace qmoments {

bool VerifyReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

namespace {

void add(VerifyReport& r, const std::string& name, double value, double threshold) {
  r.checks.push_back({name, value <= threshold, value, threshold});
}

void coefficient_checks(VerifyReport& r) {
  // Exact anchors A'_2 = 1/16, B'_2 = -5/16.
  const auto [ap2, bp2] = ap_bp(2);
  add(r, "coeff.anchor_ap2_bp2",
      (ap2 == Rational(1, 16) && bp2 == Rational(-5, 16)) ? 0 : 1, 0);

  int mismatches = 0;
  for (int n = 2; n <= kMaxMomentOrder; n += 2)
    for (int a = 1; a < n; a += 2)
      if (c_coeff(n, a) != c_coeff_closed(n, a)) ++mismatches;
  add(r, "coeff.c_recurrence_vs_closed_n16", mismatches, 0);

  mismatches = 0;
  for (int n = 3; n <= 9; n += 2)
    for (int a = 0; a < n; a += 2)
      if (d_coeff(n, a) != d_coeff_closed(n, a)) ++mismatches;
  add(r, "coeff.d_recurrence_vs_closed_n9", mismatches, 0);

  mismatches = 0;
  for (int n = 2; n <= kMaxMomentOrder; n += 2) {
    const IdentityReport rep = identity_report(n);
    if (rep.binom_sum != 0 || rep.ab_sum != 0) ++mismatches;
  }
  add(r, "coeff.vanishing_sums_n16", mismatches, 0);

  mismatches = 0;
  for (int n = 2; n <= kMaxMomentOrder; n += 2) {
    const CoeffTable t = coeff_table(n);
    if (t.a_tab.at(0) != 0 || t.b_tab.at(0) != 0) ++mismatches;
    const Rational seed(-factorial_int(n), (BigInt(1) << (n + 2)) * factorial_int(n / 2));
    if (t.c.at(n - 1) != seed) ++mismatches;
  }
  add(r, "coeff.table_invariants_n16", mismatches, 0);
}

void adiabatic_checks(VerifyReport& r, const OscillatorModel& model, unsigned seed) {
  const auto jets = make_sample_jets(model, 100, seed);
  const ResidualReport rep = residual_suite(model, 8, jets);
  for (const auto& item : rep.by_equation)
    add(r, "adiabatic.residual_" + item.equation, item.residual, 1e-10);

  // Reduced-form identities on random jets.
  std::mt19937_64 rng(seed + 1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst_unc = 0, worst_zp = 0, worst_stack = 0, worst_asm = 0;
  for (int k = 0; k < 64; ++k) {
    double q = 1.25 * u(rng);
    double x;
    try {
      x = stiffness(model, q);
    } catch (const DomainError&) {
      continue;
    }
    (void)x;
    const Jet jet2(q, u(rng), u(rng));
    const Jet jet4(q, jet2.dq(), jet2.ddq(), u(rng), u(rng));
    const double uv = uncertainty_value(second_moment_block(model, jet2));
    const double uv2 = uncertainty_value_reduced(model, jet2);
    worst_unc = std::max(worst_unc, std::fabs(uv - uv2) / std::max(1.0, std::fabs(uv)));
    const double zp = zero_point(model, jet2);
    const double zp2 = zero_point_closed(model, jet2);
    worst_zp = std::max(worst_zp, std::fabs(zp - zp2) / std::max(1.0, std::fabs(zp)));
    // stack at order 2 vs the explicit section-4 expression
    const double g = g02_stack(model, jet2, 1, 2);
    const double xq = stiffness(model, q);
    const double u3 = u_derivative(model, q, 3), u4 = u_derivative(model, q, 4);
    const double m = model.mass(), w = model.omega();
    const double explicit2 =
        0.5 * std::pow(xq, -0.5) +
        (u3 * jet2.ddq() + u4 * jet2.dq() * jet2.dq()) / (16 * m * std::pow(w, 4)) *
            std::pow(xq, -2.5) -
        5 * std::pow(u3 * jet2.dq(), 2) / (64 * m * m * std::pow(w, 6)) * std::pow(xq, -3.5);
    worst_stack = std::max(worst_stack, std::fabs(g - explicit2) / std::max(1.0, std::fabs(g)));
    // effective-coefficient assembly vs the stack on a free jet
    const EffectiveCoeffs c = eff_coeffs(model, q, jet4.dq());
    const double lhs = c.f + c.f1 * jet4.ddq() + c.f2 * jet4.ddq() * jet4.ddq() +
                       c.f3 * jet4.dddq() + c.f4 * jet4.ddddq();
    const double rhs = g02_stack(model, jet4, 1, 4);
    worst_asm = std::max(worst_asm, std::fabs(lhs - rhs) / std::max(1.0, std::fabs(rhs)));
  }
  add(r, "adiabatic.uncertainty_reduced_identity", worst_unc, 1e-12);
  add(r, "adiabatic.zero_point_identity", worst_zp, 1e-12);
  add(r, "adiabatic.g02_stack_order2_vs_explicit", worst_stack, 1e-14);
  add(r, "effective.coeff_assembly_vs_stack", worst_asm, 1e-12);

  // gamma_eff vs the second-order restriction of the reduced form: O(hbar^2).
  std::vector<double> hbars{1e-4, 3e-4, 1e-3, 3e-3, 1e-2};
  std::vector<double> gaps;
  std::mt19937_64 rng2(seed + 2);
  std::vector<std::pair<double, double>> phase;
  for (int k = 0; k < 50; ++k) phase.emplace_back(1.5 * u(rng2), 1.5 * u(rng2));
  for (double hb : hbars) {
    const OscillatorModel scaled = model.with_hbar(hb);
    double gap = 0;
    for (auto [q, dq] : phase) {
      try {
        const double a = gamma_eff_rhs(scaled, q, dq);
        const double b = rhs_reduced(scaled, q, dq, 2);
        gap = std::max(gap, std::fabs(a - b));
      } catch (const DomainError&) {
      }
    }
    gaps.push_back(gap);
  }
  const double slope = loglog_slope(hbars, gaps);
  add(r, "effective.gamma_eff_vs_reduced_slope2", std::fabs(slope - 2.0), 0.1);
}

}  // namespace

VerifyReport verify_all(const std::optional<OscillatorModel>& model_in, const std::string& scope,
                        unsigned seed) {
  const OscillatorModel model =
      model_in ? *model_in : OscillatorModel(1, 1, 1, {0, 0, 0, 0, 1.0 / 24});
  VerifyReport r;
  if (scope == "all" || scope == "coefficients") coefficient_checks(r);
  if (scope == "all" || scope == "adiabatic") adiabatic_checks(r, model, seed);
  if (r.checks.empty()) throw ValidationError("verify: unknown scope '" + scope + "'");
  return r;
}

void print_report(std::ostream& os, const VerifyReport& report) {
  char buf[160];
  for (const auto& c : report.checks) {
    std::snprintf(buf, sizeof buf, "CHECK %-45s %s value=%.3g threshold=%.3g\n", c.name.c_str(),
                  c.pass ? "PASS" : "FAIL", c.value, c.threshold);
    os << buf;
  }
}

}  // namespace qmoments
