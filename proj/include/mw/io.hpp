#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "mw/energy.hpp"
#include "mw/process.hpp"
#include "mw/triangular.hpp"
#include "mw/verify.hpp"

namespace mw::io {

using nlohmann::json;

// Matrices travel as row-major upper-triangle lists with a "d" field.
json matrix_to_json(const Eigen::MatrixXd& m);
SpdMatrix spd_from_json(const json& j);

// Trajectory dump: one CSV row per (time, i, j) holding the flattened
// upper-triangle entries.
void write_triangular_csv(std::ostream& os, const std::vector<TriangularArray>& trajectory);
void write_edge_csv(std::ostream& os, const std::vector<process::EdgeState>& trajectory);

// Schedule file: lines "n alpha_n" plus a "default alpha" line.
process::ParamSchedule read_schedule(std::istream& is, std::vector<double> beta);

// Graph file: one "v w" edge per line, then a "boundary: v1 v2 ..." line.
energy::Dag read_graph(std::istream& is);

json report_to_json(const verify::TestReport& r);
void write_reports_csv(std::ostream& os, const std::vector<verify::TestReport>& reports);

}  // namespace mw::io
