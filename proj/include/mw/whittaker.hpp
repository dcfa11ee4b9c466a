#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "mw/energy.hpp"
#include "mw/estimate.hpp"
#include "mw/rng.hpp"
#include "mw/triangular.hpp"

namespace mw::whittaker {

using Cplx = std::complex<double>;

// log Delta^N_lambda(x): -lambda_1 log|x^1_1| - sum_{i>=2} lambda_i
// (log|row_i product| - log|row_{i-1} product|).
Cplx log_delta(const std::vector<Cplx>& lambda, const TriangularArray& x);

// Energy Phi^N(x) = sum over the triangular pattern arrows of tr[a b^{-1}];
// shares the graph with energy::triangular_graph(N).
double phi_energy(const TriangularArray& x);

// Trapezoidal analogues, including the tr[s (x^N_N)^{-1}] boundary term.
Cplx log_delta_trap(const std::vector<Cplx>& lambda, const TrapezoidArray& x);
double phi_energy_trap(const PsdMatrix& s, const TrapezoidArray& x);

// psi^N_lambda(z) by nested double-exponential quadrature over the inner
// variables in logarithmic coordinates. Only d = 1, N <= 3. Returns the
// complex log of the Whittaker function (real for real lambda).
Cplx whittaker_quadrature(const std::vector<Cplx>& lambda, const MatrixVector& z, double tol = 1e-10);

struct WhittakerEstimate {
  Cplx log_value;
  double rel_se = 0.0;
  double ess = 0.0;
};

// Importance-sampling estimate of psi^N_lambda(z) for any d, N: inner rows
// are proposed top-down with per-entry scaled inverse Wishart matched to the
// neighbouring scales, weights aggregated by log-sum-exp.
WhittakerEstimate whittaker_mc(const std::vector<Cplx>& lambda, const MatrixVector& z, long budget,
                               RngStream& rng);

// Generalised (trapezoidal) Whittaker function psi^{N,n}_{lambda;s}(z) with
// lambda of length n >= N. For n = N this is the closed relation
// e^{-tr[s z_N^{-1}]} psi^N_lambda(z); for n > N one extra integration layer
// per step, by Monte Carlo (any d) or quadrature (d = 1, N = 1, n <= 3).
WhittakerEstimate whittaker_trap(const std::vector<Cplx>& lambda, const PsdMatrix& s,
                                 const MatrixVector& z, long budget, RngStream& rng);
double whittaker_trap_quadrature_d1(const std::vector<double>& lambda, double s, double z,
                                    double tol = 1e-10);  // N = 1, n = |lambda| <= 3

// Evaluation method for the matrix Whittaker measure density.
struct EvalConfig {
  enum class Method { kQuadrature, kImportance } method = Method::kQuadrature;
  double tol = 1e-9;
  long budget = 200000;
  std::uint64_t seed = 1;
};

// log density of the matrix Whittaker measure W^{N,n}_{lambda,rho} w.r.t.
// mu^{(x)N}; lambda real of length n, rho real of length N.
double whittaker_measure_log_density(const std::vector<double>& lambda, const std::vector<double>& rho,
                                     const MatrixVector& z, const EvalConfig& cfg = {});

// log of the saddle-point approximation of psi^N(r^N(k)):
// (N(N-1)d(d+1)/8) log(2 pi / k) - (1/2) log|H(m)| - k Phi^N(m).
double whittaker_asymptotic_rhs(int N, int d, double k, const energy::MinimizerResult& min_result);

// Convenience wrapper: log psi^N_lambda for real lambda, quadrature-backed
// (d = 1, N <= 3).
std::function<double(const MatrixVector&)> make_log_psi(const std::vector<double>& lambda,
                                                        double tol = 1e-9);

}  // namespace mw::whittaker
