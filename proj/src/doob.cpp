#include "mw/doob.hpp"

#include <cmath>

#include "mw/kernels.hpp"
#include "mw/quadrature.hpp"
#include "mw/special_functions.hpp"
#include "mw/whittaker.hpp"

namespace mw::kernels {

UChain::UChain(process::ParamSchedule sched, int n_steps, int d)
    : sched_(std::move(sched)), n_(n_steps), d_(d) {
  if (n_ < 1) throw Error("UChain: needs n >= 1");
  for (int ell = 1; ell <= n_; ++ell) {
    for (int i = 1; i <= sched_.rows(); ++i) sched_.innovation_param(ell, i, d_);  // validates
  }
}

MatrixVector UChain::sample(const MatrixVector& z0, RngStream& rng) const {
  const int N = sched_.rows();
  if (static_cast<int>(z0.size()) != N) throw DimensionMismatchError("UChain::sample: |z0| != N");

  if (N == 1) {
    SpdMatrix z = z0[0];
    for (int ell = 1; ell <= n_; ++ell) {
      z = sample_P1_norm(sched_.innovation_param(ell, 1, d_), z, rng);
    }
    return {z};
  }

  process::McmcConfig mcmc;
  const auto seed = process::sample_sigma_bar(z0, sched_.beta(), mcmc, rng);
  TriangularArray x = seed.samples.front();
  for (int ell = 1; ell <= n_; ++ell) x = process::step_triangular(x, ell, sched_, rng);
  return x.row(N);
}

double UChain::log_density_d1(const MatrixVector& z0, const MatrixVector& zn, double tol) const {
  const int N = sched_.rows();
  if (d_ != 1) throw Error("UChain::log_density_d1: d = 1 only");
  if (n_ > 3) throw Error("UChain::log_density_d1: n <= 3 only");

  if (N == 1) {
    const double z_end = zn[0](0, 0);
    // rho_ell(w) = density of the chain after ell steps, integrated backwards.
    std::function<double(int, double)> log_rho = [&](int ell, double w) -> double {
      const double shape = sched_.innovation_param(ell, 1, d_);
      auto log_pbar = [&](double from, double to) {
        return shape * (std::log(from) - std::log(to)) - from / to - log_multigamma(1, shape);
      };
      if (ell == 1) return log_pbar(z0[0](0, 0), w);
      return quad::mu_d1_log([&](double v) { return log_rho(ell - 1, v) + log_pbar(v, w); }, tol);
    };
    return log_rho(n_, z_end);
  }

  if (N != 2) throw Error("UChain::log_density_d1: N <= 2 only");
  std::vector<double> beta = sched_.beta();
  const auto log_psi = whittaker::make_log_psi(beta, tol * 1e-2);

  auto log_doob = [&](int ell, const MatrixVector& a, const MatrixVector& b) {
    const double alpha = sched_.alpha(ell);
    double norm = 0.0;
    for (double bi : beta) norm += log_multigamma(1, alpha + bi);
    return log_P(alpha, a, b).value + log_psi(b) - log_psi(a) - norm;
  };

  if (n_ == 1) return log_doob(1, z0, zn);
  if (n_ == 2) {
    return quad::mu_d1_log(
        [&](double w1) {
          return quad::mu_d1_log(
              [&](double w2) {
                const MatrixVector w{SpdMatrix::scalar(1, w1), SpdMatrix::scalar(1, w2)};
                return log_doob(1, z0, w) + log_doob(2, w, zn);
              },
              tol * 0.1);
        },
        tol);
  }
  throw Error("UChain::log_density_d1: N = 2 supports n <= 2");
}

}  // namespace mw::kernels
