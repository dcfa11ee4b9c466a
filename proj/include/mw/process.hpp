#pragma once

#include <map>
#include <optional>
#include <vector>

#include "mw/estimate.hpp"
#include "mw/rng.hpp"
#include "mw/triangular.hpp"

namespace mw::process {

// Time-dependent alpha(n) plus the row parameters beta; the admissibility
// constraint alpha(n) + beta^i > (d-1)/2 is checked on access.
class ParamSchedule {
 public:
  ParamSchedule(double alpha_default, std::vector<double> beta);
  ParamSchedule(std::map<int, double> alpha_overrides, double alpha_default, std::vector<double> beta);

  double alpha(int n) const;
  const std::vector<double>& beta() const { return beta_; }
  int rows() const { return static_cast<int>(beta_.size()); }

  // alpha(n) + beta^i for the innovation of row i at time n; throws if the
  // parameter constraint fails for dimension d.
  double innovation_param(int n, int i, int d) const;

 private:
  std::map<int, double> overrides_;
  double alpha_default_;
  std::vector<double> beta_;
};

// Innovations W^i_j(n), i.i.d. inverse Wishart(alpha(n) + beta^i) across j.
TriangularArray sample_innovations(int N, int d, int n, const ParamSchedule& sched, RngStream& rng);

// One step of the triangular dynamic; rows are updated in ascending order,
// row i-1 fully committed before row i.
TriangularArray step_triangular(const TriangularArray& x, int n, const ParamSchedule& sched,
                                RngStream& rng);
TriangularArray step_triangular_with(const TriangularArray& x, const TriangularArray& w);

// Interacting particles on the closed cone; zero particles are admissible
// and become SPD as soon as their left neighbour is.
struct EdgeState {
  std::vector<PsdMatrix> particles;

  int size() const { return static_cast<int>(particles.size()); }
  static EdgeState step_initial(int N, int d);  // (I, 0, ..., 0)
};

EdgeState right_edge_step(const EdgeState& z, int n, const ParamSchedule& sched, RngStream& rng);
EdgeState right_edge_step_with(const EdgeState& z, const MatrixVector& v);

EdgeState left_edge_step(const EdgeState& l, int n, const ParamSchedule& sched, RngStream& rng);
EdgeState left_edge_step_with(const EdgeState& l, const MatrixVector& u);

// Exact (+,*) dynamic programming for the d = 1 lattice path ensembles.
// weights[m-1][k-1] = V^k(m) for times m = 1..n and levels k = 1..N.
// Returns Z^i(n) (directed paths from (1,1) to (n,i)) for i = 1..N.
std::vector<double> polymer_dp_d1(const std::vector<std::vector<double>>& weights);
// Strict-weak paths from (0,1) to (n,i): horizontal edge (m,k)->(m+1,k)
// carries weights[m][k-1], diagonal edges carry 1.
std::vector<double> strict_weak_dp_d1(const std::vector<std::vector<double>>& weights);

// Special configuration r^i_j(k) = k^{2j-i-1} I_d.
MatrixVector r_array(int N, double k, int d);
TriangularArray r_triangle(int N, double k, int d);

struct McmcConfig {
  int burn_in = 5000;
  int thin = 10;
  double initial_step = 0.6;
  double target_accept = 0.3;
};

struct SigmaBarDraws {
  std::vector<TriangularArray> samples;
  double acceptance = 0.0;  // post burn-in
  double iact = 1.0;        // integrated autocorrelation of a scalar summary
  bool converged = true;    // acceptance within [0.1, 0.6] after adaptation
};

// Random-walk Metropolis in log-matrix coordinates targeting the inner rows
// of Sigma-bar^N_beta(z; .). The bottom row of every sample equals z.
SigmaBarDraws sample_sigma_bar_chain(const MatrixVector& z, const std::vector<double>& beta,
                                     const McmcConfig& cfg, int count, RngStream& rng);
SigmaBarDraws sample_sigma_bar(const MatrixVector& z, const std::vector<double>& beta,
                               const McmcConfig& cfg, RngStream& rng);

struct FkConfig {
  long n_paths = 20000;
  double tail_tol = 1e-6;
};

// Monte-Carlo estimate of E_y[exp(-sum_n V(Y(n); Y(n+1)))] for N independent
// inverse-Wishart walks with parameters lambda; the series is truncated at a
// depth chosen from the Lyapunov exponents so the tail is below tail_tol.
Estimate fk_estimate(const MatrixVector& y, const std::vector<double>& lambda, const FkConfig& cfg,
                     RngStream& rng);

// Truncation depth used by fk_estimate (exposed for tests).
int fk_truncation_depth(const std::vector<double>& lambda, int d, double tail_tol, double v0_scale);

}  // namespace mw::process
