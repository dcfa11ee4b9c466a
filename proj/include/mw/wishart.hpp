#pragma once

#include <utility>

#include "mw/rng.hpp"
#include "mw/spd.hpp"

namespace mw {

struct WishartParam {
  int d = 1;
  double alpha = 1.0;  // must exceed (d-1)/2

  bool valid() const { return d >= 1 && alpha > 0.5 * (d - 1); }
};

// Draw from the d-variate Wishart law with density |x|^a e^{-tr x} / Gamma_d(a)
// w.r.t. mu; equivalently standard Wishart with 2a degrees of freedom and
// scale I/2. Bartlett construction, valid for all admissible (non-integer) a.
SpdMatrix sample_wishart(const WishartParam& p, RngStream& rng);

// Inverse of a Wishart draw: density |x|^{-a} e^{-tr x^{-1}} / Gamma_d(a).
SpdMatrix sample_inv_wishart(const WishartParam& p, RngStream& rng);

// One step of the GL_d-invariant random walk: T_r(w) = r^{1/2} w r^{1/2}.
SpdMatrix rw_step(const SpdMatrix& r, const SpdMatrix& w);

// Almost-sure exponential growth rates (1/n) log of the extreme eigenvalues
// of the inverse-Wishart walk with parameter lambda:
//   first  = -psi(lambda - (d-1)/2)   (max eigenvalue)
//   second = -psi(lambda)             (min eigenvalue)
std::pair<double, double> lyapunov_exponents(double lambda, int d);

}  // namespace mw
