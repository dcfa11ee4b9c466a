#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "mw/estimate.hpp"
#include "mw/rng.hpp"
#include "mw/spd.hpp"

namespace mw::energy {

// Finite acyclic directed graph with a boundary vertex set that contains
// every source and every sink; the complement of the boundary is the set of
// free vertices of the constrained minimisation.
class Dag {
 public:
  Dag(int vertex_count, std::vector<std::pair<int, int>> edges, std::vector<int> boundary,
      std::vector<std::string> labels = {});

  int vertex_count() const { return vertex_count_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<int>& boundary() const { return boundary_; }     // sorted
  const std::vector<int>& free_vertices() const { return free_; }    // sorted
  bool is_boundary(int v) const;
  const std::string& label(int v) const { return labels_[v]; }

  const std::vector<int>& out(int v) const { return out_[v]; }  // v -> w
  const std::vector<int>& in(int v) const { return in_[v]; }    // u -> v

 private:
  void validate() const;

  int vertex_count_ = 0;
  std::vector<std::pair<int, int>> edges_;
  std::vector<int> boundary_;
  std::vector<int> free_;
  std::vector<std::string> labels_;
  std::vector<std::vector<int>> out_, in_;
};

// Triangular pattern graph: vertices (i,j), 1 <= j <= i <= N, edges
// (i,j)->(i+1,j) and (i+1,j+1)->(i,j); boundary is row N. Vertex ids are
// assigned row by row, so (i,j) -> i(i-1)/2 + j - 1.
Dag triangular_graph(int N);
int triangular_vertex(int i, int j);

// Directed chain v_0 -> v_1 -> ... -> v_{len}; boundary {v_0, v_len}.
Dag chain_graph(int len);

// Energy functions: arrays are indexed by vertex id.
double energy_phi(const std::vector<SymMatrix>& x, const Dag& g);   // sum tr[e^{x_v} e^{-x_w}]
double energy_chi(const std::vector<SymMatrix>& x, const Dag& g);   // sum tr[e^{x_v - x_w}]
double energy_Phi(const std::vector<SpdMatrix>& x, const Dag& g);   // sum tr[x_v x_w^{-1}]

class BoundaryAssignment {
 public:
  // values aligned with dag.boundary() order
  explicit BoundaryAssignment(std::vector<SpdMatrix> values);
  static BoundaryAssignment scalars(const std::vector<double>& zeta, int d);

  const std::vector<SpdMatrix>& values() const { return values_; }
  bool all_diagonal(double tol = 1e-14) const;
  bool all_scalar(double tol = 1e-14) const;

 private:
  std::vector<SpdMatrix> values_;
};

struct MinimizerResult {
  std::vector<SpdMatrix> values;  // per vertex, boundary included
  double grad_norm = 0.0;         // sup-norm of the critical-equation residual
  Eigen::MatrixXd hessian;        // over free Lebesgue coordinates
  double log_det_hessian = 0.0;
  double energy = 0.0;            // Phi_d at the minimiser
};

// d = 1 minimisation of Phi_1 with boundary values zeta (Phi coordinates,
// positive). Newton on the free coordinates of phi_1 in logarithmic
// variables with Armijo backtracking; strict convexity makes the minimiser
// unique and the iteration globally convergent.
MinimizerResult minimize_phi1(const Dag& g, const std::vector<double>& zeta, double tol = 1e-12);

// General d. Scalar boundary: solves the d=1 problem once and lifts
// m_v = mu_v * I. Diagonal boundary: solves d independent d=1 problems.
// Any other boundary is rejected; no uniqueness theorem covers it.
MinimizerResult minimize_Phi(const Dag& g, const BoundaryAssignment& z, double tol = 1e-12);

// Experimental, non-certified: gradient descent on phi_d for arbitrary
// symmetric boundary data. No uniqueness guarantee.
std::vector<SpdMatrix> minimize_Phi_experimental(const Dag& g, const BoundaryAssignment& z,
                                                 double tol = 1e-8, int max_iter = 20000);

// Dense Hessian of Phi_d over the free Lebesgue coordinates, evaluated at a
// critical point with scalar entries (residual below 1e-8 enforced).
Eigen::MatrixXd hessian_Phi(const Dag& g, const std::vector<SpdMatrix>& x_critical);

// Sup-norm of x_v^{-1} (sum_{u->v} x_u) x_v^{-1} - sum_{v->w} x_w^{-1} over
// free vertices.
double critical_residual(const Dag& g, const std::vector<SpdMatrix>& x);

struct LaplaceCheck {
  double log_rhs = 0.0;   // saddle-point formula
  double log_lhs = 0.0;   // integral, by quadrature or MC
  double lhs_rel_se = 0.0;  // 0 for quadrature
  std::string method;
};

// Compares int prod_v mu(dx_v) g(x) e^{-k Phi_d(x)} against its Laplace
// approximation. Scalar boundary only. The integral side is computed by
// nested quadrature for d = 1 with at most two free vertices, by importance
// sampling around the minimiser otherwise.
LaplaceCheck laplace_integral(const Dag& g, const BoundaryAssignment& z,
                              const std::function<double(const std::vector<SpdMatrix>&)>& gfun,
                              double k, RngStream& rng, long mc_budget = 200000);

// log of the saddle-point right-hand side for a precomputed minimiser.
double laplace_log_rhs(const Dag& g, const MinimizerResult& m, double g_at_min, double k);

}  // namespace mw::energy
