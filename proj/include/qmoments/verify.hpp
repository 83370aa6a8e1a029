#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qmoments/model.hpp"

namespace qmoments {

struct Check {
  std::string name;
  bool pass = false;
  double value = 0;      // measured quantity (residual, mismatch count, ...)
  double threshold = 0;  // pass when value <= threshold (or == for exact)
};

struct VerifyReport {
  std::vector<Check> checks;
  bool all_pass() const;
};

// Identity and residual contracts of the coefficient and adiabatic modules.
// scope: "all", "coefficients" or "adiabatic". Falls back to the quartic
// U = q^4/24 with m = omega = hbar = 1 when no model is given.
VerifyReport verify_all(const std::optional<OscillatorModel>& model = std::nullopt,
                        const std::string& scope = "all", unsigned seed = 42);

// One "CHECK <name> PASS|FAIL value=<v> threshold=<t>" line per check.
void print_report(std::ostream& os, const VerifyReport& report);

}  // namespace qmoments
