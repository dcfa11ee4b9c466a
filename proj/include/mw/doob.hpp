#pragma once

#include "mw/process.hpp"
#include "mw/triangular.hpp"

namespace mw::kernels {

// Composition U^{N,n} of Doob-transformed P kernels from time 1 to n.
// Sampling: for N = 1 each step is a renormalised one-particle kernel with
// shifted shape, drawn exactly; for N >= 2 the chain is realised through
// the triangular dynamic seeded by sigma-bar. Density evaluation by
// quadrature is available for d = 1, N <= 2, n <= 3.
class UChain {
 public:
  UChain(process::ParamSchedule sched, int n_steps, int d);

  int steps() const { return n_; }

  MatrixVector sample(const MatrixVector& z0, RngStream& rng) const;

  double log_density_d1(const MatrixVector& z0, const MatrixVector& zn, double tol = 1e-8) const;

 private:
  process::ParamSchedule sched_;
  int n_;
  int d_;
};

}  // namespace mw::kernels
