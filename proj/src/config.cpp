#include "qmoments/config.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "qmoments/effective.hpp"

namespace qmoments {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  std::size_t e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

struct KeyValue {
  std::string value;
  bool used = false;
};

using Section = std::map<std::string, KeyValue>;

double parse_double(const std::string& path, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return d;
  } catch (const std::exception&) {
    throw ValidationError(path + ": expected a number, got '" + v + "'");
  }
}

long parse_int(const std::string& path, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long d = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return d;
  } catch (const std::exception&) {
    throw ValidationError(path + ": expected an integer, got '" + v + "'");
  }
}

std::vector<double> parse_list(const std::string& path, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string tok;
  while (ss >> tok) {
    if (!tok.empty() && tok.back() == ',') tok.pop_back();
    if (tok.empty()) continue;
    out.push_back(parse_double(path, tok));
  }
  return out;
}

}  // namespace

RunSpec parse_config(const std::string& text) {
  std::map<std::string, Section> sections;
  std::string current;
  std::istringstream in(text);
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = trim(line);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ParseError("line " + std::to_string(lineno) + ": unterminated section header");
      current = trim(s.substr(1, s.size() - 2));
      if (current != "model" && current != "run" && current != "output")
        throw ParseError("line " + std::to_string(lineno) + ": unknown section [" + current + "]");
      sections[current];
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ParseError("line " + std::to_string(lineno) + ": expected key = value");
    if (current.empty())
      throw ParseError("line " + std::to_string(lineno) + ": key outside of any section");
    const std::string key = trim(s.substr(0, eq));
    if (key.empty()) throw ParseError("line " + std::to_string(lineno) + ": empty key");
    sections[current][key] = {trim(s.substr(eq + 1)), false};
  }

  RunSpec spec;
  auto take = [&](const char* sec, const char* key) -> std::optional<std::string> {
    auto si = sections.find(sec);
    if (si == sections.end()) return std::nullopt;
    auto ki = si->second.find(key);
    if (ki == si->second.end()) return std::nullopt;
    ki->second.used = true;
    return ki->second.value;
  };
  auto path = [](const char* sec, const char* key) {
    return std::string("[") + sec + "]." + key;
  };

  if (auto v = take("model", "m")) spec.m = parse_double(path("model", "m"), *v);
  if (auto v = take("model", "omega")) spec.omega = parse_double(path("model", "omega"), *v);
  if (auto v = take("model", "hbar")) spec.hbar = parse_double(path("model", "hbar"), *v);
  if (auto v = take("model", "u_coeffs")) spec.u_coeffs = parse_list(path("model", "u_coeffs"), *v);

  if (auto v = take("run", "mode")) {
    if (*v == "hierarchy") spec.mode = RunMode::hierarchy;
    else if (*v == "effective") spec.mode = RunMode::effective;
    else if (*v == "coefficients") spec.mode = RunMode::coefficients;
    else if (*v == "verify") spec.mode = RunMode::verify;
    else if (*v == "compare") spec.mode = RunMode::compare;
    else throw ValidationError("[run].mode: unknown mode '" + *v + "'");
  }
  if (auto v = take("run", "q0")) spec.q0 = parse_double(path("run", "q0"), *v);
  if (auto v = take("run", "p0")) spec.p0 = parse_double(path("run", "p0"), *v);
  if (auto v = take("run", "init")) {
    if (*v == "harmonic_vacuum") spec.init = InitMode::harmonic_vacuum;
    else if (*v == "adiabatic_vacuum") spec.init = InitMode::adiabatic_vacuum;
    else throw ValidationError("[run].init: unknown mode '" + *v + "'");
  }
  if (auto v = take("run", "init_order"))
    spec.init_order = static_cast<int>(parse_int(path("run", "init_order"), *v));
  if (auto v = take("run", "N")) spec.n_max = static_cast<int>(parse_int(path("run", "N"), *v));
  if (auto v = take("run", "hbar_order"))
    spec.hbar_order = static_cast<int>(parse_int(path("run", "hbar_order"), *v));
  if (auto v = take("run", "adiabatic_order"))
    spec.adiabatic_order = static_cast<int>(parse_int(path("run", "adiabatic_order"), *v));
  if (auto v = take("run", "t_end")) spec.t_end = parse_double(path("run", "t_end"), *v);
  if (auto v = take("run", "rel_tol")) spec.rel_tol = parse_double(path("run", "rel_tol"), *v);
  if (auto v = take("run", "abs_tol")) spec.abs_tol = parse_double(path("run", "abs_tol"), *v);
  if (auto v = take("run", "max_step")) spec.max_step = parse_double(path("run", "max_step"), *v);
  if (auto v = take("run", "fixed_step"))
    spec.fixed_step = parse_double(path("run", "fixed_step"), *v);
  if (auto v = take("run", "closure")) {
    if (*v == "truncate") spec.closure = Closure::truncate;
    else if (*v == "adiabatic" || *v == "adiabatic_closure") spec.closure = Closure::adiabatic;
    else throw ValidationError("[run].closure: unknown mode '" + *v + "'");
  }
  if (auto v = take("run", "form")) {
    if (*v == "reduced") spec.form = EffectiveForm::reduced;
    else if (*v == "fourth") spec.form = EffectiveForm::fourth;
    else throw ValidationError("[run].form: unknown form '" + *v + "'");
  }
  if (auto v = take("run", "metric")) {
    if (*v == "sup") spec.metric = CompareMetric::sup;
    else if (*v == "l2") spec.metric = CompareMetric::l2;
    else throw ValidationError("[run].metric: unknown metric '" + *v + "'");
  }
  if (auto v = take("run", "seed"))
    spec.seed = static_cast<unsigned>(parse_int(path("run", "seed"), *v));
  if (auto v = take("run", "workers"))
    spec.workers = static_cast<int>(parse_int(path("run", "workers"), *v));
  if (auto v = take("run", "n")) spec.coeff_n = static_cast<int>(parse_int(path("run", "n"), *v));
  if (auto v = take("run", "verify_scope")) spec.verify_scope = *v;
  if (auto v = take("run", "traj_a")) spec.traj_a = *v;
  if (auto v = take("run", "traj_b")) spec.traj_b = *v;
  if (auto v = take("run", "sweep")) spec.sweep = parse_list(path("run", "sweep"), *v);
  if (auto v = take("output", "path")) spec.out_path = *v;

  for (const auto& [sec, kv] : sections)
    for (const auto& [key, val] : kv)
      if (!val.used)
        throw ValidationError("[" + sec + "]." + key + ": unknown key");

  // Semantic validation with key paths.
  if (!(spec.m > 0)) throw ValidationError("[model].m: must be positive");
  if (!(spec.omega > 0)) throw ValidationError("[model].omega: must be positive");
  if (!(spec.hbar > 0)) throw ValidationError("[model].hbar: must be positive");
  for (std::size_t k = 0; k < spec.u_coeffs.size() && k < 3; ++k)
    if (spec.u_coeffs[k] != 0.0)
      throw ValidationError("[model].u_coeffs: index " + std::to_string(k) +
                            " must be zero (no constant, linear or quadratic term)");
  if (static_cast<int>(spec.u_coeffs.size()) - 1 > kMaxPotentialDegree)
    throw ValidationError("[model].u_coeffs: degree exceeds " +
                          std::to_string(kMaxPotentialDegree));
  if (spec.n_max < 2 || spec.n_max % 2 != 0 || spec.n_max > kMaxMomentOrder)
    throw ValidationError("[run].N: must be even and in [2, " +
                          std::to_string(kMaxMomentOrder) + "]");
  if (spec.hbar_order < 0 || spec.hbar_order > 2)
    throw ValidationError("[run].hbar_order: must be 0, 1 or 2");
  if (spec.adiabatic_order != 2 && spec.adiabatic_order != 4)
    throw ValidationError("[run].adiabatic_order: must be 2 or 4");
  if (spec.init_order < 0 || spec.init_order > 2)
    throw ValidationError("[run].init_order: must be 0, 1 or 2");
  if (!(spec.rel_tol > 0) || !(spec.abs_tol > 0))
    throw ValidationError("[run].rel_tol/abs_tol: must be positive");
  if (spec.workers < 1) throw ValidationError("[run].workers: must be >= 1");
  if (spec.mode == RunMode::compare && spec.sweep.empty() &&
      (spec.traj_a.empty() || spec.traj_b.empty()))
    throw ValidationError("[run].traj_a/traj_b: compare mode needs two trajectory files "
                          "or a sweep list");
  if (spec.mode == RunMode::coefficients && spec.coeff_n == 0)
    throw ValidationError("[run].n: coefficients mode needs the table order n");
  return spec;
}

RunSpec load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open config file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

}  // namespace qmoments
