#include "mw/io.hpp"

#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace mw::io {

json matrix_to_json(const Eigen::MatrixXd& m) {
  const int d = static_cast<int>(m.rows());
  std::vector<double> upper;
  upper.reserve(d * (d + 1) / 2);
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) upper.push_back(m(i, j));
  return json{{"d", d}, {"upper", upper}};
}

SpdMatrix spd_from_json(const json& j) {
  const int d = j.at("d").get<int>();
  const auto upper = j.at("upper").get<std::vector<double>>();
  if (static_cast<int>(upper.size()) != d * (d + 1) / 2) throw Error("spd_from_json: wrong entry count");
  Eigen::MatrixXd m(d, d);
  std::size_t k = 0;
  for (int i = 0; i < d; ++i)
    for (int j2 = i; j2 < d; ++j2) {
      m(i, j2) = upper[k];
      m(j2, i) = upper[k];
      ++k;
    }
  return SpdMatrix(m);
}

namespace {

void write_entry_row(std::ostream& os, int time, int i, int j, const Eigen::MatrixXd& m) {
  os << time << "," << i << "," << j;
  for (int a = 0; a < m.rows(); ++a)
    for (int b = a; b < m.cols(); ++b) os << "," << m(a, b);
  os << "\n";
}

void write_header(std::ostream& os, int d) {
  os << "time,i,j";
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b) os << ",m" << a << b;
  os << "\n";
}

}  // namespace

void write_triangular_csv(std::ostream& os, const std::vector<TriangularArray>& trajectory) {
  if (trajectory.empty()) return;
  write_header(os, trajectory.front().dim());
  for (std::size_t t = 0; t < trajectory.size(); ++t) {
    const auto& x = trajectory[t];
    for (int i = 1; i <= x.height(); ++i)
      for (int j = 1; j <= i; ++j) write_entry_row(os, static_cast<int>(t), i, j, x.at(i, j).mat());
  }
}

void write_edge_csv(std::ostream& os, const std::vector<process::EdgeState>& trajectory) {
  if (trajectory.empty()) return;
  write_header(os, trajectory.front().particles.front().dim());
  for (std::size_t t = 0; t < trajectory.size(); ++t) {
    const auto& z = trajectory[t];
    for (int i = 1; i <= z.size(); ++i) {
      write_entry_row(os, static_cast<int>(t), i, 1, z.particles[i - 1].mat());
    }
  }
}

process::ParamSchedule read_schedule(std::istream& is, std::vector<double> beta) {
  std::map<int, double> overrides;
  double fallback = 0.0;
  bool have_default = false;
  std::string line;
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (head == "default") {
      if (!(ls >> fallback)) throw Error("schedule: malformed default line");
      have_default = true;
    } else {
      const int n = std::stoi(head);
      double a;
      if (!(ls >> a)) throw Error("schedule: malformed line '" + line + "'");
      overrides[n] = a;
    }
  }
  if (!have_default) throw Error("schedule: missing 'default alpha' line");
  return process::ParamSchedule(std::move(overrides), fallback, std::move(beta));
}

energy::Dag read_graph(std::istream& is) {
  std::vector<std::pair<int, int>> edges;
  std::vector<int> boundary;
  int max_vertex = -1;
  std::string line;
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (head == "boundary:") {
      int v;
      while (ls >> v) {
        boundary.push_back(v);
        max_vertex = std::max(max_vertex, v);
      }
    } else {
      const int v = std::stoi(head);
      int w;
      if (!(ls >> w)) throw Error("graph: malformed edge line '" + line + "'");
      edges.emplace_back(v, w);
      max_vertex = std::max(max_vertex, std::max(v, w));
    }
  }
  if (boundary.empty()) throw Error("graph: missing 'boundary:' section");
  return energy::Dag(max_vertex + 1, std::move(edges), std::move(boundary));
}

json report_to_json(const verify::TestReport& r) {
  return json{{"name", r.name},       {"params", r.params},         {"statistic", r.statistic},
              {"p_value", r.p_value}, {"threshold", r.threshold},   {"pass", r.pass},
              {"seed", r.seed},       {"samples", r.sample_budget}, {"runtime_ms", r.runtime_ms}};
}

void write_reports_csv(std::ostream& os, const std::vector<verify::TestReport>& reports) {
  os << "name,params,statistic,p_value,threshold,pass,seed,samples,runtime_ms\n";
  for (const auto& r : reports) {
    os << r.name << ",\"" << r.params << "\"," << r.statistic << "," << r.p_value << ","
       << r.threshold << "," << (r.pass ? 1 : 0) << "," << r.seed << "," << r.sample_budget << ","
       << r.runtime_ms << "\n";
  }
}

}  // namespace mw::io
