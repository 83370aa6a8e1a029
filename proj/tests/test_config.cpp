#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "qmoments/csv.hpp"
#include "qmoments/runner.hpp"

using namespace qmoments;

TEST_CASE("minimal harmonic config fills defaults") {
  const RunSpec spec = parse_config("[model]\nm = 1\nomega = 1\nhbar = 1\n"
                                    "[run]\nmode = hierarchy\n");
  CHECK(spec.n_max == 2);
  CHECK(spec.hbar_order == 1);
  CHECK(spec.rel_tol == 1e-9);
  CHECK(spec.abs_tol == 1e-12);
  CHECK(spec.seed == 42);
  CHECK(spec.u_coeffs.empty());
  CHECK(spec.init == InitMode::harmonic_vacuum);
}

TEST_CASE("full config round") {
  const RunSpec spec = parse_config(
      "# comment\n"
      "[model]\nm = 2.0\nomega = 0.5\nhbar = 0.25\nu_coeffs = 0 0 0 0.1 0.0416666\n"
      "[run]\nmode = effective\nq0 = 1.5\np0 = -0.25\nN = 4\nhbar_order = 2\n"
      "adiabatic_order = 2\nt_end = 10\nrel_tol = 1e-8\nform = fourth\nseed = 7\n"
      "closure = adiabatic\ninit = adiabatic_vacuum\ninit_order = 1\n"
      "[output]\npath = /tmp/out.csv\n");
  CHECK(spec.m == 2.0);
  CHECK(spec.u_coeffs.size() == 5);
  CHECK(spec.mode == RunMode::effective);
  CHECK(spec.form == EffectiveForm::fourth);
  CHECK(spec.closure == Closure::adiabatic);
  CHECK(spec.init == InitMode::adiabatic_vacuum);
  CHECK(spec.init_order == 1);
  CHECK(spec.out_path == "/tmp/out.csv");
  CHECK_NOTHROW(spec.model());
}

TEST_CASE("validation errors carry the key path") {
  // quadratic term in the anharmonicity
  try {
    parse_config("[model]\nu_coeffs = 0 0 0.5\n[run]\nmode = hierarchy\n");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("[model].u_coeffs") != std::string::npos);
  }
  // odd truncation order
  try {
    parse_config("[run]\nmode = hierarchy\nN = 3\n");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("[run].N") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config("[run]\nmode = warp\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("[run]\nbogus_key = 1\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("[model]\nm = -1\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("[run]\nmode = compare\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("[run]\nmode = coefficients\n"), ValidationError);
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse_config("[weird]\nx = 1\n"), ParseError);
  CHECK_THROWS_AS(parse_config("[model\nm = 1\n"), ParseError);
  CHECK_THROWS_AS(parse_config("m = 1\n"), ParseError);
  CHECK_THROWS_AS(parse_config("[model]\nno equals sign\n"), ParseError);
}

TEST_CASE("run: verify mode reports and exits zero") {
  RunSpec spec = parse_config("[run]\nmode = verify\nverify_scope = coefficients\n");
  std::ostringstream log;
  spec.out_path = "/tmp/qm_verify_report.txt";
  CHECK(run(spec, log) == kExitOk);
  std::ifstream f(spec.out_path);
  std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  CHECK(text.find("CHECK coeff.anchor_ap2_bp2") != std::string::npos);
  CHECK(text.find("FAIL") == std::string::npos);
}

TEST_CASE("run: hierarchy mode writes a deterministic CSV") {
  const char* cfg =
      "[model]\nu_coeffs = 0 0 0 0 0.0416666666666\nhbar = 0.01\n"
      "[run]\nmode = hierarchy\nt_end = 3.0\n[output]\npath = /tmp/qm_traj_a.csv\n";
  RunSpec spec = parse_config(cfg);
  std::ostringstream log;
  CHECK(run(spec, log) == kExitOk);
  RunSpec spec2 = parse_config(cfg);
  spec2.out_path = "/tmp/qm_traj_b.csv";
  CHECK(run(spec2, log) == kExitOk);
  std::ifstream fa("/tmp/qm_traj_a.csv"), fb("/tmp/qm_traj_b.csv");
  std::string ta((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
  std::string tb((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
  CHECK(ta == tb);  // byte-identical
  CHECK(ta.substr(0, 38) == "t,q,p,G_0_2,G_1_2,G_2_2,HQ,uncertainty");
  // the CSV reads back for compare
  const QPath p = read_qpath_csv("/tmp/qm_traj_a.csv");
  CHECK(p.t.size() > 10);
  CHECK(p.q.front() == 1.0);
}

TEST_CASE("run: compare mode on two files emits metric,value,slope") {
  std::ostringstream log;
  {
    RunSpec h = parse_config("[model]\nhbar = 0.01\nu_coeffs = 0 0 0 0 0.04\n"
                             "[run]\nmode = hierarchy\nt_end = 5\n"
                             "[output]\npath = /tmp/qm_cmp_h.csv\n");
    REQUIRE(run(h, log) == kExitOk);
    RunSpec e = parse_config("[model]\nhbar = 0.01\nu_coeffs = 0 0 0 0 0.04\n"
                             "[run]\nmode = effective\nt_end = 5\n"
                             "[output]\npath = /tmp/qm_cmp_e.csv\n");
    REQUIRE(run(e, log) == kExitOk);
  }
  RunSpec c = parse_config("[run]\nmode = compare\ntraj_a = /tmp/qm_cmp_h.csv\n"
                           "traj_b = /tmp/qm_cmp_e.csv\nmetric = sup\n"
                           "[output]\npath = /tmp/qm_cmp_out.txt\n");
  CHECK(run(c, log) == kExitOk);
  std::ifstream f("/tmp/qm_cmp_out.txt");
  std::string line;
  std::getline(f, line);
  CHECK(line.substr(0, 4) == "sup,");
  CHECK(line.find(",nan") != std::string::npos);
}

TEST_CASE("run: X-crossing run exits 1 and reports the failure time") {
  RunSpec spec = parse_config("[model]\nhbar = 1e-4\nu_coeffs = 0 0 0 0 -1.0\n"
                              "[run]\nmode = hierarchy\nq0 = 0\np0 = 1\nt_end = 5\n");
  std::ostringstream log;
  CHECK(run(spec, log) == kExitIntegration);
  CHECK(log.str().find("FAILED at t =") != std::string::npos);
}

TEST_CASE("run: compare sweep produces a slope") {
  RunSpec spec = parse_config(
      "[model]\nu_coeffs = 0 0 0 0 0.0416666666666\n"
      "[run]\nmode = compare\nsweep = 0.003 0.01 0.03\nt_end = 6.283\nworkers = 3\n"
      "[output]\npath = /tmp/qm_sweep.txt\n");
  std::ostringstream log;
  CHECK(run(spec, log) == kExitOk);
  std::ifstream f("/tmp/qm_sweep.txt");
  std::string line;
  std::getline(f, line);
  double gap = 0, slope = 0;
  CHECK(std::sscanf(line.c_str(), "sup,%lf,%lf", &gap, &slope) == 2);
  CHECK(gap > 0);
}
