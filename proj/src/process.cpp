#include "mw/process.hpp"

#include <cmath>
#include <limits>

#include "mw/special_functions.hpp"
#include "mw/whittaker.hpp"
#include "mw/wishart.hpp"

namespace mw::process {

ParamSchedule::ParamSchedule(double alpha_default, std::vector<double> beta)
    : alpha_default_(alpha_default), beta_(std::move(beta)) {}

ParamSchedule::ParamSchedule(std::map<int, double> alpha_overrides, double alpha_default,
                             std::vector<double> beta)
    : overrides_(std::move(alpha_overrides)), alpha_default_(alpha_default), beta_(std::move(beta)) {}

double ParamSchedule::alpha(int n) const {
  const auto it = overrides_.find(n);
  return it == overrides_.end() ? alpha_default_ : it->second;
}

double ParamSchedule::innovation_param(int n, int i, int d) const {
  if (i < 1 || i > rows()) throw Error("ParamSchedule: row index out of range");
  const double a = alpha(n) + beta_[i - 1];
  if (!(a > 0.5 * (d - 1))) {
    throw Error("ParamSchedule: alpha(" + std::to_string(n) + ") + beta^" + std::to_string(i) +
                " = " + std::to_string(a) + " violates > (d-1)/2");
  }
  return a;
}

TriangularArray sample_innovations(int N, int d, int n, const ParamSchedule& sched, RngStream& rng) {
  TriangularArray w(N, d);
  for (int i = 1; i <= N; ++i) {
    const WishartParam p{d, sched.innovation_param(n, i, d)};
    for (int j = 1; j <= i; ++j) w.at(i, j) = sample_inv_wishart(p, rng);
  }
  return w;
}

TriangularArray step_triangular(const TriangularArray& x, int n, const ParamSchedule& sched,
                                RngStream& rng) {
  return step_triangular_with(x, sample_innovations(x.height(), x.dim(), n, sched, rng));
}

TriangularArray step_triangular_with(const TriangularArray& x, const TriangularArray& w) {
  const int N = x.height();
  if (w.height() != N) throw DimensionMismatchError("step_triangular_with: innovation shape");
  TriangularArray next = x;
  for (int i = 1; i <= N; ++i) {
    for (int j = 1; j <= i; ++j) {
      if (i == 1 && j == 1) {
        next.at(1, 1) = sym_mult(x.at(1, 1), w.at(1, 1));
      } else if (j == 1) {
        // pushed by the already-updated left neighbour of the row above
        next.at(i, 1) = sym_mult(SpdMatrix(next.at(i - 1, 1).mat() + x.at(i, 1).mat()), w.at(i, 1));
      } else if (j == i) {
        const SpdMatrix t = sym_mult(x.at(i, i), w.at(i, i));
        next.at(i, i) = inv_spd(SpdMatrix(inv_spd(x.at(i - 1, i - 1)).mat() + inv_spd(t).mat()));
      } else {
        const SpdMatrix t = sym_mult(SpdMatrix(next.at(i - 1, j).mat() + x.at(i, j).mat()), w.at(i, j));
        next.at(i, j) = inv_spd(SpdMatrix(inv_spd(x.at(i - 1, j - 1)).mat() + inv_spd(t).mat()));
      }
    }
  }
  return next;
}

EdgeState EdgeState::step_initial(int N, int d) {
  EdgeState s;
  s.particles.assign(N, PsdMatrix::zero(d));
  s.particles[0] = PsdMatrix(SpdMatrix::identity(d));
  return s;
}

namespace {

MatrixVector edge_innovations(const EdgeState& s, int n, const ParamSchedule& sched, RngStream& rng,
                              bool invert) {
  const int d = s.particles.front().dim();
  MatrixVector v;
  v.reserve(s.size());
  for (int i = 1; i <= s.size(); ++i) {
    const WishartParam p{d, sched.innovation_param(n, i, d)};
    v.push_back(invert ? sample_wishart(p, rng) : sample_inv_wishart(p, rng));
  }
  return v;
}

// T_base(v) for a possibly-zero PSD base.
PsdMatrix psd_sym_mult(const PsdMatrix& base, const SpdMatrix& v) {
  if (base.is_zero()) return PsdMatrix::zero(base.dim());
  return PsdMatrix(sym_mult(base.as_spd(), v));
}

}  // namespace

EdgeState right_edge_step_with(const EdgeState& z, const MatrixVector& v) {
  if (static_cast<int>(v.size()) != z.size()) throw DimensionMismatchError("right_edge_step_with");
  bool any_spd = false;
  for (const auto& p : z.particles) any_spd = any_spd || !p.is_zero();
  if (!any_spd) throw Error("right_edge_step: all particles zero, no SPD seed");

  EdgeState next = z;
  next.particles[0] = psd_sym_mult(z.particles[0], v[0]);
  for (int i = 1; i < z.size(); ++i) {
    const PsdMatrix base(next.particles[i - 1].mat() + z.particles[i].mat());
    next.particles[i] = psd_sym_mult(base, v[i]);
  }
  return next;
}

EdgeState right_edge_step(const EdgeState& z, int n, const ParamSchedule& sched, RngStream& rng) {
  return right_edge_step_with(z, edge_innovations(z, n, sched, rng, /*invert=*/false));
}

EdgeState left_edge_step_with(const EdgeState& l, const MatrixVector& u) {
  if (static_cast<int>(u.size()) != l.size()) throw DimensionMismatchError("left_edge_step_with");
  bool any_spd = false;
  for (const auto& p : l.particles) any_spd = any_spd || !p.is_zero();
  if (!any_spd) throw Error("left_edge_step: all particles zero, no SPD seed");

  EdgeState next = l;
  next.particles[0] = psd_sym_mult(l.particles[0], u[0]);
  for (int i = 1; i < l.size(); ++i) {
    // previous-time neighbour plus the particle's own multiplicative update
    next.particles[i] = PsdMatrix(l.particles[i - 1].mat() + psd_sym_mult(l.particles[i], u[i]).mat());
  }
  return next;
}

EdgeState left_edge_step(const EdgeState& l, int n, const ParamSchedule& sched, RngStream& rng) {
  return left_edge_step_with(l, edge_innovations(l, n, sched, rng, /*invert=*/true));
}

std::vector<double> polymer_dp_d1(const std::vector<std::vector<double>>& weights) {
  const int n = static_cast<int>(weights.size());
  if (n == 0) throw Error("polymer_dp_d1: empty weights");
  const int N = static_cast<int>(weights.front().size());
  std::vector<double> prev(N, 0.0), cur(N, 0.0);
  for (int m = 1; m <= n; ++m) {
    if (static_cast<int>(weights[m - 1].size()) != N) throw Error("polymer_dp_d1: ragged weights");
    for (int k = 1; k <= N; ++k) {
      const double from_left = (m == 1) ? (k == 1 ? 1.0 : 0.0) : prev[k - 1];
      const double from_below = (k == 1) ? 0.0 : cur[k - 2];
      cur[k - 1] = weights[m - 1][k - 1] * (from_left + from_below);
    }
    prev = cur;
  }
  return cur;
}

std::vector<double> strict_weak_dp_d1(const std::vector<std::vector<double>>& weights) {
  const int n = static_cast<int>(weights.size());
  if (n == 0) throw Error("strict_weak_dp_d1: empty weights");
  const int N = static_cast<int>(weights.front().size());
  // L(0, .) = (1, 0, ..., 0); L(m, k) = L(m-1, k) * U^k(m) + L(m-1, k-1).
  std::vector<double> prev(N, 0.0), cur(N, 0.0);
  prev[0] = 1.0;
  for (int m = 1; m <= n; ++m) {
    for (int k = 1; k <= N; ++k) {
      cur[k - 1] = prev[k - 1] * weights[m - 1][k - 1] + (k >= 2 ? prev[k - 2] : 0.0);
    }
    prev = cur;
  }
  return cur;
}

MatrixVector r_array(int N, double k, int d) {
  MatrixVector z;
  z.reserve(N);
  for (int j = 1; j <= N; ++j) z.push_back(SpdMatrix::scalar(d, std::pow(k, 2 * j - N - 1)));
  return z;
}

TriangularArray r_triangle(int N, double k, int d) {
  TriangularArray t(N, d);
  for (int i = 1; i <= N; ++i)
    for (int j = 1; j <= i; ++j) t.at(i, j) = SpdMatrix::scalar(d, std::pow(k, 2 * j - i - 1));
  return t;
}

namespace {

// Log target for the Sigma-bar MCMC in log-matrix coordinates u = log x:
// Re log Delta_beta(x) - Phi(x) plus the mu-measure and exp-map Jacobian
// corrections per inner entry.
struct SigmaBarTarget {
  const MatrixVector& z;
  const std::vector<double>& beta;
  int N;
  int d;

  double operator()(const TriangularArray& inner, const std::vector<std::vector<SymMatrix>>& logs) const {
    const TriangularArray full = TriangularArray::with_bottom(inner, z);
    std::vector<whittaker::Cplx> lam(beta.begin(), beta.end());
    double v = whittaker::log_delta(lam, full).real() - whittaker::phi_energy(full);
    for (int i = 1; i <= N - 1; ++i) {
      for (int j = 1; j <= i; ++j) {
        const SymMatrix& u = logs[i - 1][j - 1];
        v += -0.5 * (d + 1) * u.mat().trace() + log_dexp_jacobian(u);
      }
    }
    return v;
  }
};

double estimate_iact(const std::vector<double>& series) {
  const std::size_t n = series.size();
  if (n < 10) return 1.0;
  double mean = 0.0;
  for (double s : series) mean += s;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double s : series) var += (s - mean) * (s - mean);
  var /= static_cast<double>(n);
  if (var == 0.0) return 1.0;
  double iact = 1.0;
  for (std::size_t lag = 1; lag < n / 4; ++lag) {
    double c = 0.0;
    for (std::size_t t = 0; t + lag < n; ++t) c += (series[t] - mean) * (series[t + lag] - mean);
    c /= var * static_cast<double>(n - lag);
    if (c < 0.02) break;
    iact += 2.0 * c;
  }
  return iact;
}

}  // namespace

SigmaBarDraws sample_sigma_bar_chain(const MatrixVector& z, const std::vector<double>& beta,
                                     const McmcConfig& cfg, int count, RngStream& rng) {
  const int N = static_cast<int>(z.size());
  if (static_cast<int>(beta.size()) != N) throw DimensionMismatchError("sample_sigma_bar: |beta| != N");
  const int d = common_dim(z);

  SigmaBarDraws out;
  if (N == 1) {
    out.samples.assign(count, TriangularArray::with_bottom(TriangularArray{}, z));
    out.acceptance = 1.0;
    return out;
  }

  // Initial inner state: entry (i,j) set to the geometric mean scale of the
  // bottom row, which keeps the chain inside the bulk for graded z.
  TriangularArray inner(N - 1, d);
  std::vector<std::vector<SymMatrix>> logs(N - 1);
  {
    double mean_logdet = 0.0;
    for (const auto& m : z) mean_logdet += logdet(m);
    mean_logdet /= static_cast<double>(N) * d;
    for (int i = 1; i <= N - 1; ++i) {
      logs[i - 1].resize(i, SymMatrix::zero(d));
      for (int j = 1; j <= i; ++j) {
        logs[i - 1][j - 1] = SymMatrix(mean_logdet * Eigen::MatrixXd::Identity(d, d));
        inner.at(i, j) = exp_sym(logs[i - 1][j - 1]);
      }
    }
  }

  const SigmaBarTarget target{z, beta, N, d};
  double log_pi = target(inner, logs);
  double step = cfg.initial_step;

  const int inner_count = N * (N - 1) / 2;
  long proposals = 0, accepts = 0, batch_proposals = 0, batch_accepts = 0, adapt_rounds = 0;
  std::vector<double> summary;
  std::vector<double> post_accept;

  auto sweep = [&](bool adapting) {
    for (int i = 1; i <= N - 1; ++i) {
      for (int j = 1; j <= i; ++j) {
        Eigen::MatrixXd s = Eigen::MatrixXd::Zero(d, d);
        for (int r = 0; r < d; ++r)
          for (int c = r; c < d; ++c) {
            const double g = step * rng.normal();
            s(r, c) = g;
            s(c, r) = g;
          }
        const SymMatrix u_new(logs[i - 1][j - 1].mat() + s);
        const SymMatrix u_old = logs[i - 1][j - 1];
        const SpdMatrix x_old = inner.at(i, j);
        logs[i - 1][j - 1] = u_new;
        inner.at(i, j) = exp_sym(u_new);
        const double log_pi_new = target(inner, logs);
        ++proposals;
        ++batch_proposals;
        const bool accept = std::log(rng.uniform()) < log_pi_new - log_pi;
        if (accept) {
          log_pi = log_pi_new;
          ++accepts;
          ++batch_accepts;
        } else {
          logs[i - 1][j - 1] = u_old;
          inner.at(i, j) = x_old;
        }
      }
    }
    if (adapting && batch_proposals >= 50 * inner_count) {
      const double rate = static_cast<double>(batch_accepts) / batch_proposals;
      ++adapt_rounds;
      step *= std::exp((rate - cfg.target_accept) / std::sqrt(static_cast<double>(adapt_rounds)));
      step = std::min(std::max(step, 1e-3), 10.0);
      batch_proposals = batch_accepts = 0;
    }
  };

  for (int it = 0; it < cfg.burn_in; ++it) sweep(true);

  proposals = accepts = 0;
  out.samples.reserve(count);
  for (int c = 0; c < count; ++c) {
    for (int t = 0; t < cfg.thin; ++t) {
      sweep(false);
      summary.push_back(logdet(inner.at(1, 1)));
    }
    out.samples.push_back(TriangularArray::with_bottom(inner, z));
  }
  out.acceptance = proposals > 0 ? static_cast<double>(accepts) / proposals : 1.0;
  out.iact = estimate_iact(summary);
  out.converged = out.acceptance >= 0.1 && out.acceptance <= 0.6;
  return out;
}

SigmaBarDraws sample_sigma_bar(const MatrixVector& z, const std::vector<double>& beta,
                               const McmcConfig& cfg, RngStream& rng) {
  return sample_sigma_bar_chain(z, beta, cfg, 1, rng);
}

int fk_truncation_depth(const std::vector<double>& lambda, int d, double tail_tol, double v0_scale) {
  double rate = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < lambda.size(); ++i) {
    rate = std::max(rate, digamma(lambda[i]) - digamma(lambda[i + 1] - 0.5 * (d - 1)));
  }
  if (!(rate < 0.0)) throw Error("fk_truncation_depth: nonnegative decay rate");
  const double log_target = std::log(tail_tol) - std::log(std::max(v0_scale, 1.0));
  return static_cast<int>(std::ceil(log_target / rate)) + 10;
}

Estimate fk_estimate(const MatrixVector& y, const std::vector<double>& lambda, const FkConfig& cfg,
                     RngStream& rng) {
  const int N = static_cast<int>(y.size());
  if (static_cast<int>(lambda.size()) != N) throw DimensionMismatchError("fk_estimate: |lambda| != N");
  const int d = common_dim(y);
  if (!(lambda[0] > 0.5 * (d - 1))) throw Error("fk_estimate: lambda_1 too small");
  for (int i = 0; i + 1 < N; ++i) {
    if (!(lambda[i + 1] - lambda[i] > 0.5 * (d - 1))) {
      throw Error("fk_estimate: requires lambda_{i+1} - lambda_i > (d-1)/2");
    }
  }

  if (N == 1) return {0.0, 0.0, static_cast<double>(cfg.n_paths)};  // V == 0, estimate is exactly 1

  double v0 = 0.0;
  for (int i = 0; i + 1 < N; ++i) v0 += trace_of_product(y[i + 1], y[i]);
  const int n_max = fk_truncation_depth(lambda, d, cfg.tail_tol, v0);

  std::vector<WishartParam> params;
  for (int i = 0; i < N; ++i) params.push_back({d, lambda[i]});

  double sum = 0.0, sum2 = 0.0;
  for (long path = 0; path < cfg.n_paths; ++path) {
    MatrixVector cur = y;
    double s = 0.0;
    for (int n = 0; n < n_max; ++n) {
      MatrixVector next;
      next.reserve(N);
      for (int i = 0; i < N; ++i) next.push_back(sym_mult(cur[i], sample_inv_wishart(params[i], rng)));
      for (int i = 0; i + 1 < N; ++i) s += trace_of_product(next[i + 1], cur[i]);
      cur = std::move(next);
    }
    const double val = std::exp(-s);
    sum += val;
    sum2 += val * val;
  }
  const double n = static_cast<double>(cfg.n_paths);
  const double mean = sum / n;
  const double se = std::sqrt(std::max(0.0, sum2 / n - mean * mean) / (n - 1.0));
  return {std::log(mean), se / mean, n};
}

}  // namespace mw::process
