#include "qmoments/csv.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace qmoments {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "t";
  for (const auto& c : traj.columns) os << "," << c;
  os << ",HQ,uncertainty,X\n";
  for (const auto& pt : traj.points) {
    os << fmt17(pt.t);
    for (Eigen::Index i = 0; i < pt.y.size(); ++i) os << "," << fmt17(pt.y[i]);
    os << "," << fmt17(pt.hq) << "," << fmt17(pt.uncertainty) << "," << fmt17(pt.x) << "\n";
  }
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream f(path);
  if (!f) throw Error("cannot open output file: " + path);
  write_trajectory_csv(f, traj);
}

QPath read_qpath_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open trajectory file: " + path);
  std::string line;
  if (!std::getline(f, line)) throw ParseError(path + ": empty file");
  int t_col = -1, q_col = -1, col = 0;
  {
    std::stringstream header(line);
    std::string name;
    while (std::getline(header, name, ',')) {
      if (name == "t") t_col = col;
      if (name == "q") q_col = col;
      ++col;
    }
  }
  if (t_col < 0 || q_col < 0) throw ParseError(path + ": header must contain t and q columns");
  QPath p;
  long lineno = 1;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string cell;
    int i = 0;
    double tv = 0, qv = 0;
    int seen = 0;
    while (std::getline(row, cell, ',')) {
      if (i == t_col || i == q_col) {
        try {
          const double v = std::stod(cell);
          if (i == t_col) tv = v;
          if (i == q_col) qv = v;
          ++seen;
        } catch (const std::exception&) {
          throw ParseError(path + ":" + std::to_string(lineno) + ": bad number '" + cell + "'");
        }
      }
      ++i;
    }
    if (seen != 2) throw ParseError(path + ":" + std::to_string(lineno) + ": missing t/q value");
    p.t.push_back(tv);
    p.q.push_back(qv);
  }
  return p;
}

}  // namespace qmoments
