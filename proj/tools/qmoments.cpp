#include <CLI11.hpp>

#include <iostream>
#include <sstream>

#include "qmoments/adiabatic.hpp"
#include "qmoments/coefficients.hpp"
#include "qmoments/runner.hpp"

namespace {

using namespace qmoments;

OscillatorModel model_from_flags(double m, double omega, double hbar,
                                 const std::vector<double>& u) {
  return OscillatorModel(m, omega, hbar, u);
}

Jet jet_from_values(const std::vector<double>& at) {
  switch (at.size()) {
    case 1:
      return Jet(at[0], 0.0);
    case 2:
      return Jet(at[0], at[1]);
    case 3:
      return Jet(at[0], at[1], at[2]);
    case 4:
      return Jet(at[0], at[1], at[2], at[3]);
    case 5:
      return Jet(at[0], at[1], at[2], at[3], at[4]);
    default:
      throw ValidationError("--at needs 1 to 5 comma-separated values (q,qdot,...)");
  }
}

int config_mode(const std::string& config_path, const std::string& out_override,
                long seed_override, RunMode expected) {
  RunSpec spec;
  try {
    spec = load_config(config_path);
    if (spec.mode != expected) {
      // Subcommand wins over the config's mode key.
      spec.mode = expected;
    }
    if (!out_override.empty()) spec.out_path = out_override;
    if (seed_override >= 0) spec.seed = static_cast<unsigned>(seed_override);
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  return run(spec, std::cerr);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"canonical effective equations for anharmonic oscillators"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  long seed = -1;

  auto add_config_mode = [&](const char* name, const char* desc, bool config_required = true) {
    CLI::App* sub = app.add_subcommand(name, desc);
    auto* opt = sub->add_option("--config", config_path, "run configuration file");
    if (config_required) opt->required();
    sub->add_option("--out", out_path, "output path (default from config, else stdout)");
    sub->add_option("--seed", seed, "override the verification seed");
    return sub;
  };

  CLI::App* hier = add_config_mode("hierarchy", "integrate the truncated moment hierarchy");
  CLI::App* eff = add_config_mode("effective", "integrate the effective equation of motion");
  CLI::App* cmp = add_config_mode("compare", "compare two trajectories or run an hbar sweep");

  // coefficients: table dump, config optional
  CLI::App* coeffs = app.add_subcommand("coefficients", "print exact coefficient tables");
  int coeff_n = 0;
  coeffs->add_option("--n", coeff_n, "even table order n")->required();
  coeffs->add_option("--out", out_path, "output path (default stdout)");

  // verify: scope positional, model config optional
  CLI::App* ver = app.add_subcommand("verify", "run identity and residual checks");
  std::string scope = "all";
  ver->add_option("scope", scope, "all, coefficients or adiabatic");
  ver->add_option("--config", config_path, "model configuration (optional)");
  ver->add_option("--out", out_path, "output path (default stdout)");
  ver->add_option("--seed", seed, "seed for the residual sample jets");

  // moments: single closed-form evaluation
  CLI::App* mom = app.add_subcommand("moments", "evaluate one closed-form moment");
  int m_n = 2, m_a = 0;
  std::string m_order = "0,0";
  std::vector<double> m_at;
  double m_mass = 1, m_omega = 1, m_hbar = 1;
  std::vector<double> m_u;
  double m_g02_input = 0;
  bool m_experimental = false;
  mom->add_option("--n", m_n, "moment order n")->required();
  mom->add_option("--a", m_a, "momentum index a")->required();
  mom->add_option("--order", m_order, "expansion order e,i (default 0,0)");
  mom->add_option("--at", m_at, "jet values q,qdot,...")->required()->delimiter(',');
  mom->add_option("--m", m_mass, "mass");
  mom->add_option("--omega", m_omega, "harmonic frequency");
  mom->add_option("--hbar", m_hbar, "action quantum");
  mom->add_option("--u-coeffs", m_u, "U polynomial coefficients c0 c1 c2 c3 ...")->delimiter(',');
  mom->add_flag("--experimental-h2", m_experimental,
                "evaluate the O(hbar) n=2 relation instead (needs --g02)");
  mom->add_option("--g02", m_g02_input, "input G^{0,2}_{2,0} for --experimental-h2");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*hier) return config_mode(config_path, out_path, seed, RunMode::hierarchy);
    if (*eff) return config_mode(config_path, out_path, seed, RunMode::effective);
    if (*cmp) return config_mode(config_path, out_path, seed, RunMode::compare);

    if (*coeffs) {
      RunSpec spec;
      spec.mode = RunMode::coefficients;
      spec.coeff_n = coeff_n;
      spec.out_path = out_path;
      return run(spec, std::cerr);
    }

    if (*ver) {
      RunSpec spec;
      if (!config_path.empty()) spec = load_config(config_path);
      spec.mode = RunMode::verify;
      spec.verify_scope = scope;
      spec.out_path = out_path;
      if (seed >= 0) spec.seed = static_cast<unsigned>(seed);
      return run(spec, std::cerr);
    }

    if (*mom) {
      const OscillatorModel model = model_from_flags(m_mass, m_omega, m_hbar, m_u);
      if (m_experimental) {
        std::cerr << "warning: the O(hbar) n=2 relation uses the 1 - U''/(m omega^2) "
                     "combination verbatim; it does not provide a complete solution\n";
        const double v = experimental_g22_h2_static(model, m_at.at(0), m_g02_input);
        std::printf("%.17g\n", v);
        return kExitOk;
      }
      int e = 0, i = 0;
      if (std::sscanf(m_order.c_str(), "%d,%d", &e, &i) != 2) {
        std::cerr << "config error: --order must be e,i\n";
        return kExitConfig;
      }
      const double v = moment(model, m_n, m_a, ExpansionOrder{e, i}, jet_from_values(m_at));
      std::printf("%.17g\n", v);
      return kExitOk;
    }
  } catch (const ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ValidationError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
