#include "mw/wishart.hpp"

#include <cmath>
#include <stdexcept>

#include "mw/special_functions.hpp"

namespace mw {

SpdMatrix sample_wishart(const WishartParam& p, RngStream& rng) {
  if (!p.valid()) throw std::invalid_argument("sample_wishart: requires alpha > (d-1)/2");
  const int d = p.d;
  // Shapes near the admissibility edge put mass on near-singular matrices;
  // draws below the SPD tolerance (probability ~1e-8 at alpha - (d-1)/2 of
  // order one) are redrawn rather than passed downstream.
  for (int attempt = 0; attempt < 64; ++attempt) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < d; ++i) {
      // A_ii^2 ~ chi^2 with 2*alpha - i dof (i zero-based), i.e. Gamma(alpha - i/2, scale 2).
      a(i, i) = std::sqrt(2.0 * rng.gamma(p.alpha - 0.5 * i));
      for (int j = 0; j < i; ++j) a(i, j) = rng.normal();
    }
    Eigen::MatrixXd x = 0.5 * a * a.transpose();
    if (is_positive_definite(x)) return SpdMatrix(std::move(x));
  }
  throw Error("sample_wishart: persistent sub-tolerance draws");
}

SpdMatrix sample_inv_wishart(const WishartParam& p, RngStream& rng) {
  return inv_spd(sample_wishart(p, rng));
}

SpdMatrix rw_step(const SpdMatrix& r, const SpdMatrix& w) {
  return sym_mult(r, w);
}

std::pair<double, double> lyapunov_exponents(double lambda, int d) {
  if (!(lambda > 0.5 * (d - 1))) {
    throw std::invalid_argument("lyapunov_exponents: requires lambda > (d-1)/2");
  }
  return {-digamma(lambda - 0.5 * (d - 1)), -digamma(lambda)};
}

}  // namespace mw
