#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "mw/doob.hpp"
#include "mw/io.hpp"
#include "mw/special_functions.hpp"
#include "mw/verify.hpp"
#include "mw/wishart.hpp"

using namespace mw;
using namespace mw::verify;

TEST_CASE("ks test machinery") {
  RngStream rng(71);
  std::vector<double> a, b;
  for (int i = 0; i < 3000; ++i) {
    a.push_back(rng.normal());
    b.push_back(rng.normal());
  }
  CHECK(ks_two_sample(a, a).statistic == doctest::Approx(0.0));
  CHECK(ks_two_sample(a, b).p_value > 0.001);

  // power sanity: shifted laws are flagged decisively
  std::vector<double> shifted;
  for (int i = 0; i < 10000; ++i) shifted.push_back(rng.normal() + 1.0);
  std::vector<double> base;
  for (int i = 0; i < 10000; ++i) base.push_back(rng.normal());
  CHECK(ks_two_sample(base, shifted).p_value < 1e-6);

  // one-sample against the true CDF
  std::vector<double> u;
  for (int i = 0; i < 5000; ++i) u.push_back(rng.uniform());
  CHECK(ks_against_cdf(u, [](double x) { return std::min(1.0, std::max(0.0, x)); }).p_value > 0.001);
}

TEST_CASE("grid law matches the inverse gamma closed form") {
  const double a = 2.3;
  const GridLaw law([a](double x) { return -a * std::log(x) - 1.0 / x; });
  for (double x : {0.3, 0.8, 2.0, 5.0}) {
    CHECK(law.cdf(x) == doctest::Approx(gamma_q(a, 1.0 / x)).epsilon(5e-5));
  }
  CHECK(law.quantile(law.cdf(1.7)) == doctest::Approx(1.7).epsilon(1e-6));
  CHECK(law.mean() == doctest::Approx(1.0 / (a - 1.0)).epsilon(1e-7));
  CHECK(law.log_normaliser() == doctest::Approx(std::lgamma(a)).epsilon(1e-7));
}

TEST_CASE("stade identity across regimes") {
  const auto base = run_stade(1, 1, 1, {1.0}, {1.0}, 1.0, 0, 7);
  CHECK(base.pass);
  CHECK(base.statistic < 1e-9);

  const auto trap = run_stade(1, 1, 2, {0.9, 1.3}, {0.8}, 1.2, 0, 7);
  CHECK(trap.pass);

  const auto mc22 = run_stade(1, 2, 2, {1.0, 1.0}, {1.0, 1.0}, 1.0, 20000, 7);
  CHECK(mc22.pass);

  const auto mcd2 = run_stade(2, 1, 1, {1.4}, {1.1}, 1.0, 10000, 7);
  CHECK(mcd2.pass);
}

TEST_CASE("dufresne identity at d=1") {
  const auto rep = run_dufresne(1, 1.0, 2.2, {SpdMatrix::scalar(1, 1.0), SpdMatrix::scalar(1, 1.3)},
                                6000, 11);
  CHECK(rep.pass);
}

TEST_CASE("dufresne degenerate y2 -> 0 sends both sides to zero") {
  RngStream rng(72);
  const double l1 = 1.0, l2 = 2.5;
  const SpdMatrix y1 = SpdMatrix::identity(1);
  const SpdMatrix y2 = SpdMatrix::scalar(1, 1e-9);
  double series_max = 0.0, closed_max = 0.0;
  for (int i = 0; i < 200; ++i) {
    SpdMatrix w1 = y1, w2 = y2;
    double acc = 0.0;
    for (int n = 0; n < 30; ++n) {
      const SpdMatrix next2 = sym_mult(w2, sample_inv_wishart({1, l2}, rng));
      acc += trace_of_product(next2, w1);
      w1 = sym_mult(w1, sample_inv_wishart({1, l1}, rng));
      w2 = next2;
    }
    series_max = std::max(series_max, acc);
    closed_max = std::max(closed_max, 1e-9 * inv_spd(sample_wishart({1, l2 - l1}, rng))(0, 0));
  }
  CHECK(series_max < 1e-4);
  CHECK(closed_max < 1e-4);
}

TEST_CASE("intertwining harness") {
  const auto rep = run_intertwining(1.5, 1.0, 1e-4);
  CHECK(rep.pass);
  CHECK(rep.statistic < 1e-4);
}

TEST_CASE("right and left marginals at N=1") {
  const process::ParamSchedule sched({{1, 2.0}, {2, 2.6}}, 2.0, {0.5});
  const auto right1 = run_right_marginal(1, 1, sched, 6000, 13);
  CHECK(right1.pass);
  const auto right2 = run_right_marginal(1, 2, sched, 6000, 13);
  CHECK(right2.pass);
  const auto left2 = run_left_marginal(1, 2, sched, 6000, 13);
  CHECK(left2.pass);
}

TEST_CASE("fixed-time law and edge marginals at N=2") {
  const process::ParamSchedule sched(2.2, {0.4, 0.9});
  const auto fixed = run_fixed_time_law({2.0, 5.0, 20.0}, sched, 1200, 17);
  CHECK(fixed.pass);

  const auto right = run_right_marginal(2, 2, sched, 2000, 17);
  CHECK(right.pass);
  const auto left = run_left_marginal(2, 2, sched, 2000, 17);
  CHECK(left.pass);
}

TEST_CASE("bottom-edge markov harness") {
  process::McmcConfig mcmc;
  mcmc.burn_in = 2000;
  mcmc.thin = 20;
  const process::ParamSchedule sched(2.2, {0.4, 0.9});
  const auto rep = run_bottom_markov({SpdMatrix::scalar(1, 1.1), SpdMatrix::scalar(1, 0.8)}, sched,
                                     mcmc, 4000, 19);
  CHECK(rep.pass);
}

TEST_CASE("doob chain sampling at N=2 stays in the cone") {
  const process::ParamSchedule sched(2.0, {0.4, 0.9});
  const kernels::UChain chain(sched, 2, 1);
  RngStream rng(21);
  const MatrixVector z0{SpdMatrix::scalar(1, 1.0), SpdMatrix::scalar(1, 1.5)};
  for (int rep = 0; rep < 5; ++rep) {
    const MatrixVector zn = chain.sample(z0, rng);
    REQUIRE(zn.size() == 2);
    CHECK(zn[0](0, 0) > 0.0);
    CHECK(zn[1](0, 0) > 0.0);
  }
}

TEST_CASE("io round trips") {
  // matrix json
  Eigen::MatrixXd m(2, 2);
  m << 1.5, 0.3, 0.3, 2.0;
  const auto j = io::matrix_to_json(m);
  CHECK(j["d"] == 2);
  CHECK(io::spd_from_json(j).mat().isApprox(m, 1e-14));

  // schedule file
  std::istringstream sched_is("1 2.5\n3 1.75\ndefault 2.0\n");
  const auto sched = io::read_schedule(sched_is, {0.5, 0.7});
  CHECK(sched.alpha(1) == doctest::Approx(2.5));
  CHECK(sched.alpha(2) == doctest::Approx(2.0));
  CHECK(sched.alpha(3) == doctest::Approx(1.75));
  std::istringstream bad("1 2.5\n");
  CHECK_THROWS(io::read_schedule(bad, {0.5}));

  // graph file
  std::istringstream graph_is("0 1\n1 2\nboundary: 0 2\n");
  const auto g = io::read_graph(graph_is);
  CHECK(g.vertex_count() == 3);
  CHECK(g.edges().size() == 2);
  CHECK(g.free_vertices() == std::vector<int>{1});

  // report serialisation
  verify::TestReport r;
  r.name = "demo";
  r.params = "d=1";
  r.statistic = 0.01;
  r.p_value = 0.5;
  r.pass = true;
  const auto rj = io::report_to_json(r);
  CHECK(rj["name"] == "demo");
  CHECK(rj["pass"] == true);

  std::ostringstream csv;
  io::write_reports_csv(csv, {r});
  CHECK(csv.str().find("demo") != std::string::npos);

  // trajectory csv shape: header + 3 entries per time for a height-2 array
  std::ostringstream traj;
  io::write_triangular_csv(traj, {TriangularArray(2, 2), TriangularArray(2, 2)});
  int lines = 0;
  std::string line;
  std::istringstream read_back(traj.str());
  while (std::getline(read_back, line)) ++lines;
  CHECK(lines == 1 + 2 * 3);
}
