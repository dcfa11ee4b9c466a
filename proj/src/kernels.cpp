#include "mw/kernels.hpp"

#include <cmath>

#include "mw/special_functions.hpp"
#include "mw/whittaker.hpp"
#include "mw/wishart.hpp"

namespace mw::kernels {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_lengths(std::size_t got, std::size_t want, const char* who) {
  if (got != want) throw DimensionMismatchError(std::string(who) + ": length mismatch");
}

}  // namespace

Cplx log_K(Cplx b, const MatrixVector& z, const MatrixVector& y) {
  const std::size_t n = z.size();
  if (n < 2) throw DimensionMismatchError("log_K: needs N >= 2");
  check_lengths(y.size(), n - 1, "log_K");
  Cplx acc(0.0, 0.0);
  for (const auto& zi : z) acc += -b * logdet(zi);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    acc += b * logdet(y[j]);
    acc -= trace_of_product(z[j + 1], y[j]) + trace_of_product(y[j], z[j]);
  }
  return acc;
}

LogDensity log_K(double b, const MatrixVector& z, const MatrixVector& y) {
  return {log_K(Cplx(b, 0.0), z, y).real()};
}

Cplx log_P(Cplx a, const MatrixVector& z, const MatrixVector& zt) {
  check_lengths(zt.size(), z.size(), "log_P");
  Cplx acc(0.0, 0.0);
  for (std::size_t i = 0; i + 1 < z.size(); ++i) acc -= trace_of_product(zt[i + 1], z[i]);
  for (std::size_t j = 0; j < z.size(); ++j) {
    acc += a * (logdet(z[j]) - logdet(zt[j]));
    acc -= trace_of_product(z[j], zt[j]);
  }
  return acc;
}

LogDensity log_P(double a, const MatrixVector& z, const MatrixVector& zt) {
  return {log_P(Cplx(a, 0.0), z, zt).real()};
}

SpdMatrix sample_P1_norm(double a, const SpdMatrix& z, RngStream& rng) {
  return sym_mult(z, sample_inv_wishart({z.dim(), a}, rng));
}

Cplx log_Q(Cplx a, const MatrixVector& y, const MatrixVector& yt, const MatrixVector& z,
           const MatrixVector& zt) {
  const std::size_t n = z.size();
  check_lengths(zt.size(), n, "log_Q");
  check_lengths(y.size(), n - 1, "log_Q(y)");
  check_lengths(yt.size(), n - 1, "log_Q(yt)");
  const int d = common_dim(z);

  Cplx acc(0.0, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    // S_j = yt_j + z_j, with the convention yt_N = 0.
    const Eigen::MatrixXd s = (j + 1 < n) ? (yt[j].mat() + z[j].mat()).eval() : z[j].mat();
    const SpdMatrix s_spd{s};

    if (j == 0) {
      // y_0^{-1} = 0: the factor collapses to |S zt^{-1}|^a e^{-tr[S zt^{-1}]}.
      acc += a * (logdet(s_spd) - logdet(zt[0]));
      acc -= trace_of_product(s_spd, zt[0]);
      continue;
    }

    // Indicator: zt_j^{-1} - y_{j-1}^{-1} is PD iff y_{j-1} - zt_j is.
    const Eigen::MatrixXd gap = y[j - 1].mat() - zt[j].mat();
    if (!is_positive_definite(gap, 0.0)) return Cplx(-kInf, 0.0);
    const SpdMatrix gap_spd{gap};

    const Eigen::MatrixXd diff = inv_spd(zt[j]).mat() - inv_spd(y[j - 1]).mat();
    const SpdMatrix diff_spd{diff};
    acc += a * (logdet(s_spd) + logdet(diff_spd));
    acc -= (s * diff).trace();
    // |I - zt_j y_{j-1}^{-1}| = |y_{j-1} - zt_j| / |y_{j-1}|
    acc -= 0.5 * (d + 1) * (logdet(gap_spd) - logdet(y[j - 1]));
  }
  return acc;
}

LogDensity log_Q(double a, const MatrixVector& y, const MatrixVector& yt, const MatrixVector& z,
                 const MatrixVector& zt) {
  return {log_Q(Cplx(a, 0.0), y, yt, z, zt).real()};
}

MatrixVector sample_Q_norm(double a, const MatrixVector& y, const MatrixVector& yt,
                           const MatrixVector& z, RngStream& rng) {
  const std::size_t n = z.size();
  check_lengths(y.size(), n - 1, "sample_Q_norm(y)");
  check_lengths(yt.size(), n - 1, "sample_Q_norm(yt)");
  const int d = common_dim(z);
  const WishartParam p{d, a};

  MatrixVector zt;
  zt.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    const SpdMatrix base = (j + 1 < n) ? SpdMatrix(yt[j].mat() + z[j].mat()) : z[j];
    const SpdMatrix t = sym_mult(base, sample_inv_wishart(p, rng));
    if (j == 0) {
      zt.push_back(t);
    } else {
      zt.push_back(inv_spd(SpdMatrix(inv_spd(y[j - 1]).mat() + inv_spd(t).mat())));
    }
  }
  return zt;
}

Cplx log_Sigma(const std::vector<Cplx>& lambda, const MatrixVector& z, const TriangularArray& x_inner) {
  const int N = static_cast<int>(z.size());
  if (static_cast<int>(lambda.size()) != N) throw DimensionMismatchError("log_Sigma: |lambda| != N");
  if (N == 1) return -lambda[0] * logdet(z[0]);
  if (x_inner.height() != N - 1) throw DimensionMismatchError("log_Sigma: inner height != N-1");
  const TriangularArray full = TriangularArray::with_bottom(x_inner, z);
  return whittaker::log_delta(lambda, full) - whittaker::phi_energy(full);
}

Cplx log_Lambda(Cplx a, Cplx b, const MatrixVector& y, const MatrixVector& z, const MatrixVector& yt,
                const MatrixVector& zt) {
  const Cplx q = log_Q(a + b, y, yt, z, zt);
  if (q.real() == -kInf) return q;
  return log_P(a, y, yt) + q;
}

LogDensity log_P_doob(double a, const std::vector<double>& lambda, const MatrixVector& z,
                      const MatrixVector& zt,
                      const std::function<double(const MatrixVector&)>& log_psi) {
  const int d = common_dim(z);
  double norm = 0.0;
  for (double l : lambda) {
    if (!(a + l > 0.5 * (d - 1))) throw Error("log_P_doob: requires a + lambda_i > (d-1)/2");
    norm += log_multigamma(d, a + l);
  }
  return {log_P(a, z, zt).value + log_psi(zt) - log_psi(z) - norm};
}

PkRelation log_relation_PK_check(double a, const MatrixVector& z, const MatrixVector& y,
                                 const SpdMatrix& s) {
  const std::size_t n = z.size();
  check_lengths(y.size(), n - 1, "log_relation_PK_check");

  PkRelation r{};
  r.log_k = log_K(a, z, y).value;

  MatrixVector ys = y;
  ys.push_back(s);
  r.via_P_with_s = -a * logdet(s) + trace_of_product(s, z[n - 1]) + log_P(a, ys, z).value;

  MatrixVector z_head(z.begin(), z.end() - 1);
  r.via_P_reduced = -a * logdet(z[n - 1]) - trace_of_product(z[n - 1], y[n - 2]) +
                    log_P(a, y, z_head).value;
  return r;
}

}  // namespace mw::kernels
