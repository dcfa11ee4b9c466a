// Command-line front end: simulation, evaluators, minimisation, asymptotics
// sweeps, Schur checks and the verification harness.

#include <CLI11.hpp>
#include <json.hpp>

#include <complex>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mw/doob.hpp"
#include "mw/energy.hpp"
#include "mw/io.hpp"
#include "mw/kernels.hpp"
#include "mw/process.hpp"
#include "mw/rng.hpp"
#include "mw/schur.hpp"
#include "mw/spd.hpp"
#include "mw/verify.hpp"
#include "mw/whittaker.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using nlohmann::json;

std::vector<double> parse_csv(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stod(tok));
  }
  if (out.empty()) throw std::invalid_argument("expected a comma-separated list, got '" + s + "'");
  return out;
}

std::vector<int> parse_csv_int(const std::string& s) {
  std::vector<int> out;
  for (double v : parse_csv(s)) out.push_back(static_cast<int>(v));
  return out;
}

mw::MatrixVector scalars_d(const std::vector<double>& xs, int d) {
  mw::MatrixVector v;
  for (double x : xs) v.push_back(mw::SpdMatrix::scalar(d, x));
  return v;
}

void emit(const std::string& payload, const std::string& output_path) {
  if (output_path.empty()) {
    std::cout << payload << "\n";
  } else {
    std::ofstream os(output_path);
    if (!os) throw std::runtime_error("cannot open output file " + output_path);
    os << payload;
    std::cerr << "wrote " << output_path << "\n";
  }
}

mw::energy::Dag load_graph(const std::string& spec) {
  if (spec.rfind("triangular:", 0) == 0) {
    return mw::energy::triangular_graph(std::stoi(spec.substr(11)));
  }
  if (spec.rfind("chain:", 0) == 0) {
    return mw::energy::chain_graph(std::stoi(spec.substr(6)));
  }
  std::ifstream is(spec);
  if (!is) throw std::invalid_argument("cannot open graph file " + spec);
  return mw::io::read_graph(is);
}

std::vector<double> load_boundary(const std::string& spec, std::size_t count) {
  if (spec == "ones") return std::vector<double>(count, 1.0);
  const auto vals = parse_csv(spec);
  if (vals.size() != count) {
    throw std::invalid_argument("boundary needs " + std::to_string(count) + " values, got " +
                                std::to_string(vals.size()));
  }
  return vals;
}

struct CliConfig {
  std::uint64_t seed = 0;
  std::string output;
  std::string format = "json";
  int workers = 1;
};

mw::process::ParamSchedule make_schedule(double alpha, const std::string& schedule_file,
                                         std::vector<double> beta) {
  if (!schedule_file.empty()) {
    std::ifstream is(schedule_file);
    if (!is) throw std::invalid_argument("cannot open schedule file " + schedule_file);
    return mw::io::read_schedule(is, std::move(beta));
  }
  return mw::process::ParamSchedule(alpha, std::move(beta));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"matrix Whittaker process toolkit"};
  app.require_subcommand(1);

  CliConfig cfg;
  cfg.seed = mw::seed_from_env();
  app.add_option("--seed", cfg.seed, "master seed (default: MW_SEED or built-in)");
  app.add_option("--output", cfg.output, "write results to this file instead of stdout");
  app.add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--workers", cfg.workers, "worker count (execution is deterministic)");

  // simulate-*
  int sim_d = 1, sim_N = 2, sim_steps = 10;
  double sim_alpha = 2.0;
  std::string sim_beta = "0.4,0.9", sim_schedule;
  for (const char* name : {"simulate-triangular", "simulate-right-edge", "simulate-left-edge"}) {
    auto* sc = app.add_subcommand(name);
    sc->add_option("--d", sim_d, "matrix dimension");
    sc->add_option("--N", sim_N, "number of rows / particles");
    sc->add_option("--steps", sim_steps, "number of time steps");
    sc->add_option("--alpha", sim_alpha, "constant alpha");
    sc->add_option("--schedule-file", sim_schedule, "file with lines 'n alpha' and 'default alpha'");
    sc->add_option("--beta", sim_beta, "comma-separated beta, one entry per row");
  }

  // whittaker-eval
  int we_d = 1, we_N = 2;
  long we_budget = 100000;
  double we_tol = 1e-9;
  std::string we_lambda = "0,0", we_z = "1,1", we_method = "auto";
  {
    auto* sc = app.add_subcommand("whittaker-eval", "evaluate psi^N_lambda(z)");
    sc->add_option("--d", we_d);
    sc->add_option("--N", we_N);
    sc->add_option("--lambda", we_lambda, "comma-separated parameters");
    sc->add_option("--z", we_z, "comma-separated scalar argument (z_j I_d)");
    sc->add_option("--method", we_method)->check(CLI::IsMember({"auto", "quadrature", "mc"}));
    sc->add_option("--budget", we_budget);
    sc->add_option("--tol", we_tol);
  }

  // whittaker-measure
  int wm_d = 1, wm_N = 1, wm_n = 1;
  std::string wm_lambda = "1", wm_rho = "1", wm_z = "1";
  {
    auto* sc = app.add_subcommand("whittaker-measure", "log density of W^{N,n}_{lambda,rho}");
    sc->add_option("--d", wm_d);
    sc->add_option("--N", wm_N);
    sc->add_option("--n", wm_n);
    sc->add_option("--lambda", wm_lambda);
    sc->add_option("--rho", wm_rho);
    sc->add_option("--z", wm_z);
  }

  // minimize-energy
  std::string me_graph = "triangular:3", me_boundary = "ones";
  int me_d = 1;
  double me_tol = 1e-12;
  {
    auto* sc = app.add_subcommand("minimize-energy", "constrained minimisation of Phi_d");
    sc->add_option("--graph", me_graph, "triangular:N, chain:L or a graph file");
    sc->add_option("--boundary", me_boundary, "'ones' or comma-separated positive scalars");
    sc->add_option("--d", me_d);
    sc->add_option("--tol", me_tol);
  }

  // laplace
  std::string lp_graph = "chain:2", lp_boundary = "ones", lp_gfun = "one";
  int lp_d = 1;
  double lp_k = 50.0;
  long lp_budget = 200000;
  {
    auto* sc = app.add_subcommand("laplace", "integral against its saddle-point approximation");
    sc->add_option("--graph", lp_graph);
    sc->add_option("--boundary", lp_boundary);
    sc->add_option("--d", lp_d);
    sc->add_option("--k", lp_k);
    sc->add_option("--gfun", lp_gfun)->check(CLI::IsMember({"one", "det"}));
    sc->add_option("--budget", lp_budget);
  }

  // asymptotics-sweep
  std::string as_lambda = "0,0", as_klist = "5,10,20,50";
  {
    auto* sc = app.add_subcommand("asymptotics-sweep", "psi(r^2(k)) against the Laplace forecast");
    sc->add_option("--lambda", as_lambda);
    sc->add_option("--k-list", as_klist);
  }

  // schur-check
  std::string sch_which = "cauchy", sch_x = "0.3,0.1", sch_y = "0.2", sch_mu = "";
  int sch_max = 40;
  {
    auto* sc = app.add_subcommand("schur-check", "truncated Pieri / Cauchy-Littlewood identities");
    sc->add_option("--which", sch_which)->check(CLI::IsMember({"pieri", "cauchy"}));
    sc->add_option("--x", sch_x);
    sc->add_option("--y", sch_y);
    sc->add_option("--mu", sch_mu, "partition for pieri, e.g. 2,1");
    sc->add_option("--max", sch_max, "truncation size / growth");
  }

  // verify
  std::string vf_name = "all";
  {
    auto* sc = app.add_subcommand("verify", "run named harness experiments");
    sc->add_option("name", vf_name, "experiment name or 'all'");
  }

  // global flags (--seed, --output, --format) may follow the subcommand
  for (auto* sc : app.get_subcommands([](const CLI::App*) { return true; })) sc->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const CLI::App* sub = app.get_subcommands().front();
  {
    std::ostringstream prov;
    prov << "# mw " << kVersion << " seed=" << cfg.seed << " cmd=" << sub->get_name();
    for (int i = 2; i < argc; ++i) prov << " " << argv[i];
    std::cerr << prov.str() << "\n";
  }

  // Phase 1: validate parameters and build configuration; any failure here
  // names the violated constraint and exits 2.
  // Phase 2: run; failures exit 1.
  try {
    const std::string name = sub->get_name();
    mw::RngStream rng(cfg.seed, 1);

    if (name.rfind("simulate-", 0) == 0) {
      std::vector<double> beta = parse_csv(sim_beta);
      if (static_cast<int>(beta.size()) != sim_N) {
        throw std::invalid_argument("beta must have N entries");
      }
      const auto sched = make_schedule(sim_alpha, sim_schedule, beta);
      for (int n = 1; n <= sim_steps; ++n)
        for (int i = 1; i <= sim_N; ++i) sched.innovation_param(n, i, sim_d);

      std::ostringstream payload;
      try {
        if (name == "simulate-triangular") {
          std::vector<mw::TriangularArray> traj{mw::TriangularArray(sim_N, sim_d)};
          for (int n = 1; n <= sim_steps; ++n) {
            traj.push_back(mw::process::step_triangular(traj.back(), n, sched, rng));
          }
          mw::io::write_triangular_csv(payload, traj);
        } else {
          std::vector<mw::process::EdgeState> traj{mw::process::EdgeState::step_initial(sim_N, sim_d)};
          for (int n = 1; n <= sim_steps; ++n) {
            traj.push_back(name == "simulate-right-edge"
                               ? mw::process::right_edge_step(traj.back(), n, sched, rng)
                               : mw::process::left_edge_step(traj.back(), n, sched, rng));
          }
          mw::io::write_edge_csv(payload, traj);
        }
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
      }
      emit(payload.str(), cfg.output);
      return 0;
    }

    if (name == "whittaker-eval") {
      const auto lam = parse_csv(we_lambda);
      const auto zv = parse_csv(we_z);
      if (static_cast<int>(lam.size()) != we_N || static_cast<int>(zv.size()) != we_N) {
        throw std::invalid_argument("lambda and z must each have N entries");
      }
      const bool quad_ok = we_d == 1 && we_N <= 3;
      if (we_method == "quadrature" && !quad_ok) {
        throw std::invalid_argument("quadrature requires d=1 and N<=3");
      }
      try {
        const std::vector<std::complex<double>> lc(lam.begin(), lam.end());
        const auto z = scalars_d(zv, we_d);
        json out;
        if (we_method == "quadrature" || (we_method == "auto" && quad_ok)) {
          const double lv = mw::whittaker::whittaker_quadrature(lc, z, we_tol).real();
          out = {{"method", "quadrature"}, {"log_value", lv}, {"value", std::exp(lv)}};
        } else {
          const auto est = mw::whittaker::whittaker_mc(lc, z, we_budget, rng);
          out = {{"method", "mc"},
                 {"log_value", est.log_value.real()},
                 {"value", std::exp(est.log_value.real())},
                 {"rel_se", est.rel_se},
                 {"ess", est.ess}};
        }
        emit(out.dump(2), cfg.output);
        return 0;
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
      }
    }

    if (name == "whittaker-measure") {
      const auto lam = parse_csv(wm_lambda);
      const auto rho = parse_csv(wm_rho);
      const auto zv = parse_csv(wm_z);
      if (static_cast<int>(lam.size()) != wm_n) throw std::invalid_argument("lambda must have n entries");
      if (static_cast<int>(rho.size()) != wm_N) throw std::invalid_argument("rho must have N entries");
      if (static_cast<int>(zv.size()) != wm_N) throw std::invalid_argument("z must have N entries");
      for (double l : lam)
        for (double p : rho) {
          if (!(l + p > 0.5 * (wm_d - 1))) {
            throw std::invalid_argument("requires lambda_l + rho_i > (d-1)/2");
          }
        }
      try {
        mw::whittaker::EvalConfig ec;
        ec.seed = cfg.seed;
        const double ld =
            mw::whittaker::whittaker_measure_log_density(lam, rho, scalars_d(zv, wm_d), ec);
        emit(json{{"log_density", ld}}.dump(2), cfg.output);
        return 0;
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
      }
    }

    if (name == "minimize-energy") {
      const auto g = load_graph(me_graph);
      const auto zeta = load_boundary(me_boundary, g.boundary().size());
      try {
        const auto r = mw::energy::minimize_Phi(
            g, mw::energy::BoundaryAssignment::scalars(zeta, me_d), me_tol);
        json values = json::array();
        for (int v = 0; v < g.vertex_count(); ++v) {
          values.push_back({{"vertex", g.label(v)}, {"matrix", mw::io::matrix_to_json(r.values[v].mat())}});
        }
        emit(json{{"energy", r.energy},
                  {"grad_norm", r.grad_norm},
                  {"log_det_hessian", r.log_det_hessian},
                  {"values", values}}
                 .dump(2),
             cfg.output);
        return 0;
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
      }
    }

    if (name == "laplace") {
      const auto g = load_graph(lp_graph);
      const auto zeta = load_boundary(lp_boundary, g.boundary().size());
      if (!(lp_k > 0)) throw std::invalid_argument("k must be positive");
      try {
        const auto gfun = [&](const std::vector<mw::SpdMatrix>& x) {
          if (lp_gfun == "one") return 1.0;
          double det = 1.0;
          for (int v : g.free_vertices()) det *= x[v].mat().determinant();
          return det;
        };
        const auto check = mw::energy::laplace_integral(
            g, mw::energy::BoundaryAssignment::scalars(zeta, lp_d), gfun, lp_k, rng, lp_budget);
        emit(json{{"log_lhs", check.log_lhs},
                  {"log_rhs", check.log_rhs},
                  {"ratio", std::exp(check.log_lhs - check.log_rhs)},
                  {"lhs_rel_se", check.lhs_rel_se},
                  {"method", check.method}}
                 .dump(2),
             cfg.output);
        return 0;
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
      }
    }

    if (name == "asymptotics-sweep") {
      const auto lam = parse_csv(as_lambda);
      const auto ks = parse_csv(as_klist);
      if (lam.size() != 2) throw std::invalid_argument("asymptotics-sweep is the d=1, N=2 sweep");
      try {
        const auto g = mw::energy::triangular_graph(2);
        const auto m =
            mw::energy::minimize_Phi(g, mw::energy::BoundaryAssignment::scalars({1.0, 1.0}, 1));
        std::ostringstream payload;
        payload << "k,log_psi,log_rhs,ratio\n";
        for (double k : ks) {
          const std::vector<std::complex<double>> lc(lam.begin(), lam.end());
          const double lhs = mw::whittaker::whittaker_quadrature(
                                 lc, scalars_d({1.0 / k, k}, 1), 1e-11)
                                 .real();
          const double rhs = mw::whittaker::whittaker_asymptotic_rhs(2, 1, k, m);
          payload << k << "," << lhs << "," << rhs << "," << std::exp(lhs - rhs) << "\n";
        }
        emit(payload.str(), cfg.output);
        return 0;
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
      }
    }

    if (name == "schur-check") {
      const auto x = parse_csv(sch_x);
      try {
        mw::schur::TruncatedCheck c;
        if (sch_which == "pieri") {
          const mw::schur::Partition mu(sch_mu.empty() ? std::vector<int>{} : parse_csv_int(sch_mu));
          c = mw::schur::pieri_check(mu, x, sch_max);
        } else {
          c = mw::schur::cauchy_littlewood_check(x, parse_csv(sch_y), sch_max);
        }
        const bool ok = std::abs(c.lhs - c.rhs) <= c.tail_bound + 1e-12;
        emit(json{{"lhs", c.lhs}, {"rhs", c.rhs}, {"tail_bound", c.tail_bound}, {"pass", ok}}.dump(2),
             cfg.output);
        return ok ? 0 : 1;
      } catch (const std::invalid_argument&) {
        throw;
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
      }
    }

    if (name == "verify") {
      const auto names = mw::verify::experiment_names();
      if (vf_name != "all" && std::find(names.begin(), names.end(), vf_name) == names.end()) {
        std::string known;
        for (const auto& n : names) known += n + " ";
        throw std::invalid_argument("unknown experiment '" + vf_name + "'; known: " + known);
      }
      try {
        const auto reports = (vf_name == "all") ? mw::verify::run_all(cfg.seed)
                                                : mw::verify::run_by_name(vf_name, cfg.seed);
        bool all_pass = true;
        if (cfg.format == "csv") {
          std::ostringstream payload;
          mw::io::write_reports_csv(payload, reports);
          emit(payload.str(), cfg.output);
        } else {
          json arr = json::array();
          for (const auto& r : reports) arr.push_back(mw::io::report_to_json(r));
          emit(arr.dump(2), cfg.output);
        }
        for (const auto& r : reports) all_pass = all_pass && r.pass;
        return all_pass ? 0 : 1;
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
      }
    }

    std::cerr << "error: unhandled subcommand\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "invalid parameters: " << e.what() << "\n";
    return 2;
  }
}
