#include "mw/whittaker.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "mw/quadrature.hpp"
#include "mw/special_functions.hpp"
#include "mw/wishart.hpp"

namespace mw::whittaker {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double logdet_row(const MatrixVector& row) {
  double s = 0.0;
  for (const auto& m : row) s += logdet(m);
  return s;
}

// Log-sum-exp accumulator for complex log terms: tracks the running maximum
// of the real parts, so no intermediate sum can overflow.
class CplxLogSum {
 public:
  void add(Cplx l) {
    if (!(l.real() > -kInf)) return;  // drops -inf and NaN
    if (l.real() > off_) {
      sum_ *= std::exp(off_ - l.real());
      off_ = l.real();
    }
    sum_ += std::exp(Cplx(l.real() - off_, l.imag()));
  }
  // Complex log of the accumulated sum; real part -inf when empty.
  Cplx value() const {
    if (off_ == -kInf || sum_ == Cplx(0.0, 0.0)) return Cplx(-kInf, 0.0);
    return off_ + std::log(sum_);
  }

 private:
  double off_ = -kInf;
  Cplx sum_{0.0, 0.0};
};

// log int_0^inf exp(log_f(x)) dx/x for a complex-valued exponent, by
// double-exponential quadrature in u = log x.
Cplx mu_d1_log_complex(const std::function<Cplx(double)>& log_f, double tol, int max_level = 10) {
  constexpr double kHalfPi = std::numbers::pi / 2.0;
  const double t_max = 2.2;

  auto level_logsum = [&](double h, bool odd_only) {
    CplxLogSum s;
    const int k_max = static_cast<int>(t_max / h);
    for (int k = odd_only ? 1 : 0; k <= k_max; k += odd_only ? 2 : 1) {
      const double t = k * h;
      const double u = std::sinh(kHalfPi * std::sinh(t));
      const double w = kHalfPi * std::cosh(t) * std::cosh(kHalfPi * std::sinh(t));
      if (!std::isfinite(w)) continue;
      const double log_w = std::log(w);
      s.add(log_f(std::exp(u)) + log_w);
      if (k != 0) s.add(log_f(std::exp(-u)) + log_w);
    }
    return s.value();
  };

  double h = 0.5;
  Cplx log_integral = level_logsum(h, false) + std::log(h);
  for (int level = 1; level <= max_level; ++level) {
    h *= 0.5;
    const Cplx odd = level_logsum(h, true) + std::log(h);
    CplxLogSum combine;
    combine.add(log_integral + std::log(0.5));
    combine.add(odd);
    const Cplx refined = combine.value();
    const double err = std::abs(refined - log_integral);
    log_integral = refined;
    if (log_integral.real() == -kInf) break;
    if (level >= 3 && err <= tol) break;
  }
  return log_integral;
}

}  // namespace

Cplx log_delta(const std::vector<Cplx>& lambda, const TriangularArray& x) {
  const int n = x.height();
  if (static_cast<int>(lambda.size()) != n) throw DimensionMismatchError("log_delta: |lambda| != height");
  Cplx acc(0.0, 0.0);
  double prev = 0.0;
  for (int i = 1; i <= n; ++i) {
    const double cur = logdet_row(x.row(i));
    acc += -lambda[i - 1] * (cur - prev);
    prev = cur;
  }
  return acc;
}

double phi_energy(const TriangularArray& x) {
  const int n = x.height();
  double s = 0.0;
  for (int i = 1; i < n; ++i) {
    for (int j = 1; j <= i; ++j) {
      s += trace_of_product(x.at(i + 1, j + 1), x.at(i, j));
      s += trace_of_product(x.at(i, j), x.at(i + 1, j));
    }
  }
  return s;
}

Cplx log_delta_trap(const std::vector<Cplx>& lambda, const TrapezoidArray& x) {
  const int n = x.length();
  if (static_cast<int>(lambda.size()) != n) throw DimensionMismatchError("log_delta_trap: |lambda| != n");
  Cplx acc(0.0, 0.0);
  double prev = 0.0;
  for (int i = 1; i <= n; ++i) {
    const double cur = logdet_row(x.row(i));
    acc += -lambda[i - 1] * (cur - prev);
    prev = cur;
  }
  return acc;
}

double phi_energy_trap(const PsdMatrix& s, const TrapezoidArray& x) {
  const int n = x.length();
  const int N = x.width();
  double acc = s.is_zero() ? 0.0 : trace_of_product(s, x.at(N, N));
  for (int i = 1; i < n; ++i) {
    const int up = std::min(i, N - 1);
    for (int j = 1; j <= up; ++j) acc += trace_of_product(x.at(i + 1, j + 1), x.at(i, j));
    const int down = std::min(i, N);
    for (int j = 1; j <= down; ++j) acc += trace_of_product(x.at(i, j), x.at(i + 1, j));
  }
  return acc;
}

Cplx whittaker_quadrature(const std::vector<Cplx>& lambda, const MatrixVector& z, double tol) {
  const int N = static_cast<int>(z.size());
  if (static_cast<int>(lambda.size()) != N) throw DimensionMismatchError("whittaker_quadrature: sizes");
  const int d = common_dim(z);
  if (d != 1 || N > 3) throw Error("whittaker_quadrature: only d = 1, N <= 3");

  if (N == 1) return -lambda[0] * logdet(z[0]);

  const double z1 = z[0](0, 0), z2 = z[1](0, 0);
  if (N == 2) {
    const double lzz = std::log(z1 * z2);
    return mu_d1_log_complex(
        [&](double a) {
          return -lambda[0] * std::log(a) - lambda[1] * (lzz - std::log(a)) - Cplx(z2 / a + a / z1, 0.0);
        },
        tol);
  }

  const double z3 = z[2](0, 0);
  const double lzzz = std::log(z1) + std::log(z2) + std::log(z3);
  // double-exponential errors compound roughly additively across the
  // nesting, so the inner levels only need mildly tighter tolerances
  return mu_d1_log_complex(
      [&](double b1) {
        return mu_d1_log_complex(
            [&](double b2) {
              const double lbb = std::log(b1) + std::log(b2);
              const Cplx tail = -lambda[2] * (lzzz - lbb) -
                                Cplx(z2 / b1 + b1 / z1 + z3 / b2 + b2 / z2, 0.0);
              return tail + mu_d1_log_complex(
                                [&](double a) {
                                  return -lambda[0] * std::log(a) - lambda[1] * (lbb - std::log(a)) -
                                         Cplx(b2 / a + a / b1, 0.0);
                                },
                                tol * 0.1, 8);
            },
            tol * 0.3, 9);
      },
      tol);
}

namespace {

// Scaled inverse Wishart proposal density, x = T_c(W) with W ~ iW(shape):
// log q(x) = -shape log|x| + shape log|c| - tr[c x^{-1}] - log Gamma_d(shape)
// w.r.t. mu(dx).
double log_iw_scaled(const SpdMatrix& x, const SpdMatrix& c, double shape, double lg_shape) {
  return -shape * logdet(x) + shape * logdet(c) - trace_of_product(c, x) - lg_shape;
}

struct WeightStats {
  Cplx log_mean;
  double rel_se;
  double ess;
};

WeightStats reduce_log_weights(const std::vector<Cplx>& lw) {
  double off = -kInf;
  for (const auto& l : lw) off = std::max(off, l.real());
  if (off == -kInf) return {Cplx(-kInf, 0.0), 0.0, 0.0};
  Cplx sum(0.0, 0.0);
  double sum_abs = 0.0, sum_abs2 = 0.0;
  for (const auto& l : lw) {
    const Cplx w = std::exp(l - off);
    sum += w;
    sum_abs += std::abs(w);
    sum_abs2 += std::norm(w);
  }
  const double n = static_cast<double>(lw.size());
  const Cplx mean = sum / n;
  double var = 0.0;
  for (const auto& l : lw) var += std::norm(std::exp(l - off) - mean);
  const double se = std::sqrt(var / (n * (n - 1.0)));
  return {off + std::log(mean), se / std::abs(mean), sum_abs * sum_abs / sum_abs2};
}

double mean_real(const std::vector<Cplx>& lambda) {
  double s = 0.0;
  for (const auto& l : lambda) s += l.real();
  return s / static_cast<double>(lambda.size());
}

}  // namespace

WhittakerEstimate whittaker_mc(const std::vector<Cplx>& lambda, const MatrixVector& z, long budget,
                               RngStream& rng) {
  const int N = static_cast<int>(z.size());
  if (static_cast<int>(lambda.size()) != N) throw DimensionMismatchError("whittaker_mc: sizes");
  const int d = common_dim(z);

  if (N == 1) {
    const Cplx lv = -lambda[0] * logdet(z[0]);
    return {lv, 0.0, static_cast<double>(budget)};
  }

  const double shape = std::max(mean_real(lambda), 0.5 * (d + 1)) + 1.0;
  const double lg_shape = log_multigamma(d, shape);
  const WishartParam prop{d, shape};

  std::vector<Cplx> lws;
  lws.reserve(budget);
  TriangularArray x(N, d);
  x.row(N) = z;
  for (long it = 0; it < budget; ++it) {
    double log_q = 0.0;
    for (int i = N - 1; i >= 1; --i) {
      for (int j = 1; j <= i; ++j) {
        const SpdMatrix c(0.5 * (x.at(i + 1, j).mat() + x.at(i + 1, j + 1).mat()));
        const SpdMatrix draw = sym_mult(c, sample_inv_wishart(prop, rng));
        x.at(i, j) = draw;
        log_q += log_iw_scaled(draw, c, shape, lg_shape);
      }
    }
    lws.push_back(log_delta(lambda, x) - phi_energy(x) - log_q);
  }
  const WeightStats ws = reduce_log_weights(lws);
  return {ws.log_mean, ws.rel_se, ws.ess};
}

WhittakerEstimate whittaker_trap(const std::vector<Cplx>& lambda, const PsdMatrix& s,
                                 const MatrixVector& z, long budget, RngStream& rng) {
  const int N = static_cast<int>(z.size());
  const int n = static_cast<int>(lambda.size());
  if (n < N) throw DimensionMismatchError("whittaker_trap: needs |lambda| >= |z|");
  const int d = common_dim(z);

  if (n == N) {
    const double boundary = s.is_zero() ? 0.0 : trace_of_product(s, z[N - 1]);
    if (d == 1 && N <= 3) {
      return {whittaker_quadrature(lambda, z) - boundary, 0.0, static_cast<double>(budget)};
    }
    WhittakerEstimate e = whittaker_mc(lambda, z, budget, rng);
    e.log_value -= boundary;
    return e;
  }

  const double shape = std::max(mean_real(lambda), 0.5 * (d + 1)) + 1.0;
  const double lg_shape = log_multigamma(d, shape);
  const WishartParam prop{d, shape};

  std::vector<Cplx> lws;
  lws.reserve(budget);
  TrapezoidArray x(N, n, d);
  x.row(n) = z;
  for (long it = 0; it < budget; ++it) {
    double log_q = 0.0;
    for (int i = n - 1; i >= 1; --i) {
      const int wi = x.row_width(i);
      const int wip = x.row_width(i + 1);
      for (int j = 1; j <= wi; ++j) {
        Eigen::MatrixXd csum = x.at(i + 1, j).mat();
        int cnt = 1;
        if (j + 1 <= wip) {
          csum += x.at(i + 1, j + 1).mat();
          ++cnt;
        }
        if (i == N && j == N && !s.is_zero()) {
          csum += s.mat();
          ++cnt;
        }
        const SpdMatrix c(csum / cnt);
        const SpdMatrix draw = sym_mult(c, sample_inv_wishart(prop, rng));
        x.at(i, j) = draw;
        log_q += log_iw_scaled(draw, c, shape, lg_shape);
      }
    }
    lws.push_back(log_delta_trap(lambda, x) - phi_energy_trap(s, x) - log_q);
  }
  const WeightStats ws = reduce_log_weights(lws);
  return {ws.log_mean, ws.rel_se, ws.ess};
}

double whittaker_trap_quadrature_d1(const std::vector<double>& lambda, double s, double z, double tol) {
  const int n = static_cast<int>(lambda.size());
  if (n < 1 || n > 3) throw Error("whittaker_trap_quadrature_d1: n must be 1..3");
  // Chain x^1 -> ... -> x^n = z with boundary arrow s -> x^1.
  if (n == 1) return -s / z - lambda[0] * std::log(z);
  if (n == 2) {
    return quad::mu_d1_log(
        [&](double x1) {
          return -lambda[0] * std::log(x1) - lambda[1] * (std::log(z) - std::log(x1)) - s / x1 - x1 / z;
        },
        tol);
  }
  return quad::mu_d1_log(
      [&](double x2) {
        const double outer = -lambda[2] * (std::log(z) - std::log(x2)) - x2 / z;
        return outer + quad::mu_d1_log(
                           [&](double x1) {
                             return -lambda[0] * std::log(x1) -
                                    lambda[1] * (std::log(x2) - std::log(x1)) - s / x1 - x1 / x2;
                           },
                           tol * 0.1);
      },
      tol);
}

double whittaker_measure_log_density(const std::vector<double>& lambda, const std::vector<double>& rho,
                                     const MatrixVector& z, const EvalConfig& cfg) {
  const int N = static_cast<int>(z.size());
  const int n = static_cast<int>(lambda.size());
  if (static_cast<int>(rho.size()) != N || n < N) {
    throw DimensionMismatchError("whittaker_measure_log_density: parameter sizes");
  }
  const int d = common_dim(z);
  double norm = 0.0;
  for (double l : lambda)
    for (double r : rho) {
      if (!(l + r > 0.5 * (d - 1))) throw Error("whittaker_measure: requires lambda+rho > (d-1)/2");
      norm += log_multigamma(d, l + r);
    }

  std::vector<Cplx> lc(lambda.begin(), lambda.end());
  std::vector<Cplx> rc(rho.begin(), rho.end());

  double log_psi_trap;  // psi^{N,n}_{lambda; I}(z)
  double log_psi_rho;
  if (cfg.method == EvalConfig::Method::kQuadrature && d == 1 && N <= 3 && (n == N || N == 1)) {
    log_psi_rho = whittaker_quadrature(rc, z, cfg.tol).real();
    if (n == N) {
      log_psi_trap = whittaker_quadrature(lc, z, cfg.tol).real() -
                     trace_of_product(SpdMatrix::identity(d), z[N - 1]);
    } else {
      log_psi_trap = whittaker_trap_quadrature_d1(lambda, 1.0, z[0](0, 0), cfg.tol);
    }
  } else {
    RngStream rng(cfg.seed, 77001);
    const WhittakerEstimate a =
        whittaker_trap(lc, PsdMatrix(SpdMatrix::identity(d)), z, cfg.budget, rng);
    const WhittakerEstimate b = whittaker_mc(rc, z, cfg.budget, rng);
    log_psi_trap = a.log_value.real();
    log_psi_rho = b.log_value.real();
  }
  return -norm + log_psi_trap + log_psi_rho;
}

double whittaker_asymptotic_rhs(int N, int d, double k, const energy::MinimizerResult& min_result) {
  if (min_result.values.front().dim() != d) throw DimensionMismatchError("whittaker_asymptotic_rhs: d");
  // Shared code path with the Laplace proposition on the triangular graph;
  // the mu-to-Lebesgue factor is 1 there because the minimiser's row
  // products all have unit determinant.
  return energy::laplace_log_rhs(energy::triangular_graph(N), min_result, 1.0, k);
}

std::function<double(const MatrixVector&)> make_log_psi(const std::vector<double>& lambda, double tol) {
  std::vector<Cplx> lc(lambda.begin(), lambda.end());
  return [lc, tol](const MatrixVector& z) { return whittaker_quadrature(lc, z, tol).real(); };
}

}  // namespace mw::whittaker
