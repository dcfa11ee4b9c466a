#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mw/process.hpp"
#include "mw/stats.hpp"
#include "mw/triangular.hpp"

namespace mw::verify {

using stats::ks_against_cdf;
using stats::ks_two_sample;

struct TestReport {
  std::string name;
  std::string params;       // human-readable parameter summary
  double statistic = 0.0;   // KS statistic, z-score or relative error
  double p_value = 1.0;     // 1.0 for deterministic (error-based) checks
  double threshold = 0.0;   // pass criterion on the statistic or p-value
  bool pass = false;
  long sample_budget = 0;
  double runtime_ms = 0.0;
  std::uint64_t seed = 0;
};

// Grid-based density/CDF oracle for d = 1 laws given as log density w.r.t.
// mu(dx) = dx/x; used wherever quadrature replaces Monte Carlo noise.
class GridLaw {
 public:
  explicit GridLaw(const std::function<double(double)>& log_density, int points = 4000);

  double cdf(double x) const;
  double quantile(double p) const;
  double mean() const;
  double log_normaliser() const { return log_norm_; }

 private:
  std::vector<double> us_, cdf_;
  double mean_ = 0.0;
  double log_norm_ = 0.0;
};

// The d=1, N=2 inner law of Sigma-bar_beta(z; .): density proportional to
// x^{beta2-beta1} e^{-z2/x - x/z1} w.r.t. mu(dx).
GridLaw sigma_bar_inner_law_d1n2(double z1, double z2, const std::vector<double>& beta);

// First- and last-coordinate marginal CDFs of the matrix Whittaker measure
// W^{2,2}_{(a1,a2),beta} at d = 1, by nested quadrature.
GridLaw whittaker_measure_marginal_d1n2(const std::vector<double>& alpha,
                                        const std::vector<double>& beta, bool first_coordinate);

// Distributional identity for the series sum_n tr[Y_2(n+1) Y_1(n)^{-1}]
// against tr[a Z], Z inverse Wishart(lambda2 - lambda1).
TestReport run_dufresne(int d, double lambda1, double lambda2, const MatrixVector& y, long n_samples,
                        std::uint64_t seed);

// Whittaker integral identity: the left side by quadrature (d=1 with N=1)
// or importance sampling, the right side in closed form.
TestReport run_stade(int d, int N, int n, const std::vector<double>& lambda,
                     const std::vector<double>& rho, double s_scale, long mc_budget,
                     std::uint64_t seed);

// Fixed-time law of the bottom edge started from r^N(k): KS against the
// quadrature marginal for each k, decreasing trend required, final k must
// pass the p-value floor. d = 1, N = 2, n = 2.
TestReport run_fixed_time_law(const std::vector<double>& k_values, const process::ParamSchedule& sched,
                              long n_samples, std::uint64_t seed);

// Right/left edge fixed-time marginals from step initial data, d = 1.
// N = 1 supports n <= 3; N = 2 requires n = 2.
TestReport run_right_marginal(int N, int n, const process::ParamSchedule& sched, long n_samples,
                              std::uint64_t seed);
TestReport run_left_marginal(int N, int n, const process::ParamSchedule& sched, long n_samples,
                             std::uint64_t seed);

// Kernel intertwining K~ Lambda = Gamma(a+b)^{N-1} P K~ at d = 1, N = 2 by
// nested quadrature.
TestReport run_intertwining(double a, double b, double tol);

// Bottom-edge Markovianity: one-step law of the bottom row under a
// Sigma-bar start against the Doob kernel by quadrature, plus the
// conditional-expectation identity on decile bins.
TestReport run_bottom_markov(const MatrixVector& z, const process::ParamSchedule& sched,
                             const process::McmcConfig& mcmc, long n_samples, std::uint64_t seed);

// Every harness experiment with default budgets.
std::vector<TestReport> run_all(std::uint64_t seed);

// Names accepted by run_by_name (the CLI surface of the harness).
std::vector<std::string> experiment_names();
std::vector<TestReport> run_by_name(const std::string& name, std::uint64_t seed);

}  // namespace mw::verify
