#include "mw/energy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <set>

#include "mw/quadrature.hpp"
#include "mw/stats.hpp"

namespace mw::energy {

namespace {

int tri_coord_count(int d) { return d * (d + 1) / 2; }

// Upper-triangle coordinate enumeration, row-major: (0,0),(0,1),...,(1,1),...
std::vector<std::pair<int, int>> tri_coords(int d) {
  std::vector<std::pair<int, int>> c;
  c.reserve(tri_coord_count(d));
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) c.emplace_back(i, j);
  return c;
}

}  // namespace

Dag::Dag(int vertex_count, std::vector<std::pair<int, int>> edges, std::vector<int> boundary,
         std::vector<std::string> labels)
    : vertex_count_(vertex_count), edges_(std::move(edges)), boundary_(std::move(boundary)),
      labels_(std::move(labels)) {
  std::sort(boundary_.begin(), boundary_.end());
  boundary_.erase(std::unique(boundary_.begin(), boundary_.end()), boundary_.end());
  if (labels_.empty()) {
    for (int v = 0; v < vertex_count_; ++v) labels_.push_back("v" + std::to_string(v));
  }
  out_.assign(vertex_count_, {});
  in_.assign(vertex_count_, {});
  for (const auto& [v, w] : edges_) {
    out_[v].push_back(w);
    in_[w].push_back(v);
  }
  for (int v = 0; v < vertex_count_; ++v) {
    if (!is_boundary(v)) free_.push_back(v);
  }
  validate();
}

bool Dag::is_boundary(int v) const {
  return std::binary_search(boundary_.begin(), boundary_.end(), v);
}

void Dag::validate() const {
  if (vertex_count_ < 2) throw Error("Dag: needs at least two vertices");
  std::set<std::pair<int, int>> seen;
  for (const auto& [v, w] : edges_) {
    if (v < 0 || v >= vertex_count_ || w < 0 || w >= vertex_count_) throw Error("Dag: edge out of range");
    if (v == w) throw Error("Dag: self-loop");
    if (!seen.insert({v, w}).second) throw Error("Dag: multi-edge");
  }
  // Kahn topological sort detects cycles.
  std::vector<int> indeg(vertex_count_, 0);
  for (const auto& [v, w] : edges_) indeg[w]++;
  std::queue<int> q;
  for (int v = 0; v < vertex_count_; ++v)
    if (indeg[v] == 0) q.push(v);
  int visited = 0;
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    ++visited;
    for (int w : out_[v])
      if (--indeg[w] == 0) q.push(w);
  }
  if (visited != vertex_count_) throw Error("Dag: cycle detected");
  for (int v = 0; v < vertex_count_; ++v) {
    const bool source = in_[v].empty();
    const bool sink = out_[v].empty();
    if ((source || sink) && !is_boundary(v)) throw Error("Dag: boundary must contain all sources and sinks");
  }
  if (free_.empty()) throw Error("Dag: no free vertices");
}

int triangular_vertex(int i, int j) { return i * (i - 1) / 2 + j - 1; }

Dag triangular_graph(int N) {
  if (N < 2) throw Error("triangular_graph: needs N >= 2");
  std::vector<std::pair<int, int>> edges;
  std::vector<std::string> labels;
  for (int i = 1; i <= N; ++i)
    for (int j = 1; j <= i; ++j) labels.push_back("(" + std::to_string(i) + "," + std::to_string(j) + ")");
  for (int i = 1; i < N; ++i) {
    for (int j = 1; j <= i; ++j) {
      edges.emplace_back(triangular_vertex(i, j), triangular_vertex(i + 1, j));
      edges.emplace_back(triangular_vertex(i + 1, j + 1), triangular_vertex(i, j));
    }
  }
  std::vector<int> boundary;
  for (int j = 1; j <= N; ++j) boundary.push_back(triangular_vertex(N, j));
  return Dag(N * (N + 1) / 2, std::move(edges), std::move(boundary), std::move(labels));
}

Dag chain_graph(int len) {
  if (len < 2) throw Error("chain_graph: needs length >= 2");
  std::vector<std::pair<int, int>> edges;
  for (int v = 0; v < len; ++v) edges.emplace_back(v, v + 1);
  return Dag(len + 1, std::move(edges), {0, len});
}

double energy_phi(const std::vector<SymMatrix>& x, const Dag& g) {
  double s = 0.0;
  std::vector<Eigen::MatrixXd> ep(x.size()), em(x.size());
  for (std::size_t v = 0; v < x.size(); ++v) {
    ep[v] = exp_sym(x[v]).mat();
    em[v] = exp_sym(SymMatrix(-x[v].mat())).mat();
  }
  for (const auto& [v, w] : g.edges()) s += (ep[v] * em[w]).trace();
  return s;
}

double energy_chi(const std::vector<SymMatrix>& x, const Dag& g) {
  double s = 0.0;
  for (const auto& [v, w] : g.edges()) s += exp_sym(SymMatrix(x[v].mat() - x[w].mat())).mat().trace();
  return s;
}

double energy_Phi(const std::vector<SpdMatrix>& x, const Dag& g) {
  double s = 0.0;
  for (const auto& [v, w] : g.edges()) s += trace_of_product(x[v], x[w]);
  return s;
}

BoundaryAssignment::BoundaryAssignment(std::vector<SpdMatrix> values) : values_(std::move(values)) {
  if (values_.empty()) throw Error("BoundaryAssignment: empty");
  for (const auto& m : values_) {
    if (m.dim() != values_.front().dim()) throw DimensionMismatchError("BoundaryAssignment: mixed dims");
  }
}

BoundaryAssignment BoundaryAssignment::scalars(const std::vector<double>& zeta, int d) {
  std::vector<SpdMatrix> v;
  v.reserve(zeta.size());
  for (double z : zeta) v.push_back(SpdMatrix::scalar(d, z));
  return BoundaryAssignment(std::move(v));
}

bool BoundaryAssignment::all_diagonal(double tol) const {
  for (const auto& m : values_) {
    Eigen::MatrixXd off = m.mat();
    off.diagonal().setZero();
    if (off.cwiseAbs().maxCoeff() > tol * std::max(1.0, m.mat().cwiseAbs().maxCoeff())) return false;
  }
  return true;
}

bool BoundaryAssignment::all_scalar(double tol) const {
  if (!all_diagonal(tol)) return false;
  for (const auto& m : values_) {
    const double c = m(0, 0);
    for (int i = 1; i < m.dim(); ++i) {
      if (std::abs(m(i, i) - c) > tol * std::max(1.0, std::abs(c))) return false;
    }
  }
  return true;
}

namespace {

// Newton minimisation of phi_1 in log coordinates. Boundary vertices carry
// fixed values log(zeta); free vertices are the unknowns.
std::vector<double> newton_phi1_log(const Dag& g, const std::vector<double>& log_zeta, double tol) {
  const auto& free = g.free_vertices();
  const int nf = static_cast<int>(free.size());
  std::vector<int> free_index(g.vertex_count(), -1);
  for (int k = 0; k < nf; ++k) free_index[free[k]] = k;

  std::vector<double> u(g.vertex_count(), 0.0);
  double boundary_mean = 0.0;
  for (std::size_t b = 0; b < g.boundary().size(); ++b) {
    u[g.boundary()[b]] = log_zeta[b];
    boundary_mean += log_zeta[b];
  }
  boundary_mean /= static_cast<double>(g.boundary().size());
  for (int v : free) u[v] = boundary_mean;  // geometric mean of boundary values

  auto value = [&](const std::vector<double>& uu) {
    double s = 0.0;
    for (const auto& [v, w] : g.edges()) s += std::exp(uu[v] - uu[w]);
    return s;
  };

  auto gradient = [&](const std::vector<double>& uu) {
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(nf);
    for (const auto& [v, w] : g.edges()) {
      const double e = std::exp(uu[v] - uu[w]);
      if (free_index[v] >= 0) grad[free_index[v]] += e;
      if (free_index[w] >= 0) grad[free_index[w]] -= e;
    }
    return grad;
  };

  double f = value(u);
  for (int iter = 0; iter < 200; ++iter) {
    const Eigen::VectorXd grad = gradient(u);
    if (grad.cwiseAbs().maxCoeff() < tol * std::max(1.0, f)) break;

    Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(nf, nf);
    for (const auto& [v, w] : g.edges()) {
      const double e = std::exp(u[v] - u[w]);
      const int fv = free_index[v], fw = free_index[w];
      if (fv >= 0) hess(fv, fv) += e;
      if (fw >= 0) hess(fw, fw) += e;
      if (fv >= 0 && fw >= 0) {
        hess(fv, fw) -= e;
        hess(fw, fv) -= e;
      }
    }
    const Eigen::VectorXd step = hess.ldlt().solve(-grad);

    // Armijo backtracking, c = 1e-4.
    const double slope = grad.dot(step);
    double t = 1.0;
    std::vector<double> trial = u;
    for (int ls = 0; ls < 60; ++ls) {
      for (int k = 0; k < nf; ++k) trial[free[k]] = u[free[k]] + t * step[k];
      const double ft = value(trial);
      if (ft <= f + 1e-4 * t * slope) break;
      t *= 0.5;
      if (ls == 59) throw Error("minimize_phi1: line search failed");
    }
    u = trial;
    f = value(u);
  }
  return u;
}

}  // namespace

double critical_residual(const Dag& g, const std::vector<SpdMatrix>& x) {
  double worst = 0.0;
  for (int v : g.free_vertices()) {
    const Eigen::MatrixXd xi = inv_spd(x[v]).mat();
    Eigen::MatrixXd in_sum = Eigen::MatrixXd::Zero(x[v].dim(), x[v].dim());
    for (int u : g.in(v)) in_sum += x[u].mat();
    Eigen::MatrixXd lhs = xi * in_sum * xi;
    for (int w : g.out(v)) lhs -= inv_spd(x[w]).mat();
    worst = std::max(worst, lhs.cwiseAbs().maxCoeff());
  }
  return worst;
}

Eigen::MatrixXd hessian_Phi(const Dag& g, const std::vector<SpdMatrix>& x) {
  const double res = critical_residual(g, x);
  if (!(res < 1e-8)) throw Error("hessian_Phi: not a critical point (residual " + std::to_string(res) + ")");
  const int d = x.front().dim();
  for (const auto& m : x) {
    Eigen::MatrixXd off = m.mat();
    off.diagonal().setZero();
    if (off.cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, m.mat().cwiseAbs().maxCoeff())) {
      throw Error("hessian_Phi: entries must be diagonal");
    }
  }

  const auto& free = g.free_vertices();
  const int nf = static_cast<int>(free.size());
  std::vector<int> free_index(g.vertex_count(), -1);
  for (int k = 0; k < nf; ++k) free_index[free[k]] = k;
  const auto coords = tri_coords(d);
  const int p = static_cast<int>(coords.size());

  std::vector<Eigen::MatrixXd> xinv(x.size());
  for (std::size_t v = 0; v < x.size(); ++v) xinv[v] = inv_spd(x[v]).mat();

  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(nf * p, nf * p);
  auto delta = [](int a, int b) { return a == b ? 1.0 : 0.0; };

  for (int kv = 0; kv < nf; ++kv) {
    const int v = free[kv];
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(d, d);
    for (int w : g.out(v)) s += xinv[w];
    const Eigen::MatrixXd& xi = xinv[v];
    for (int a = 0; a < p; ++a) {
      const auto [i, j] = coords[a];
      for (int b = 0; b < p; ++b) {
        const auto [k, l] = coords[b];
        const double pref = 2.0 / ((1.0 + delta(i, j)) * (1.0 + delta(k, l)));
        h(kv * p + a, kv * p + b) = pref * (xi(i, k) * s(j, l) + s(i, k) * xi(j, l) +
                                            xi(i, l) * s(j, k) + s(i, l) * xi(j, k));
      }
    }
  }

  for (const auto& [v, w] : g.edges()) {
    const int fv = free_index[v], fw = free_index[w];
    if (fv < 0 || fw < 0) continue;
    const Eigen::MatrixXd& xw = xinv[w];  // inverse at the edge head
    for (int a = 0; a < p; ++a) {
      const auto [i, j] = coords[a];
      for (int b = 0; b < p; ++b) {
        const auto [k, l] = coords[b];
        const double pref = 2.0 / ((1.0 + delta(i, j)) * (1.0 + delta(k, l)));
        const double val = -pref * (xw(i, k) * xw(j, l) + xw(i, l) * xw(j, k));
        h(fv * p + a, fw * p + b) += val;
        h(fw * p + b, fv * p + a) += val;
      }
    }
  }
  return h;
}

namespace {

MinimizerResult finish_result(const Dag& g, std::vector<SpdMatrix> values) {
  MinimizerResult r;
  r.values = std::move(values);
  r.grad_norm = critical_residual(g, r.values);
  r.energy = energy_Phi(r.values, g);
  r.hessian = hessian_Phi(g, r.values);
  const SymEigen he = sym_eigen(r.hessian);
  if (!(he.values.minCoeff() > 0.0)) throw Error("minimize_Phi: Hessian not positive definite");
  r.log_det_hessian = he.values.array().log().sum();
  return r;
}

}  // namespace

MinimizerResult minimize_phi1(const Dag& g, const std::vector<double>& zeta, double tol) {
  if (zeta.size() != g.boundary().size()) throw Error("minimize_phi1: |zeta| != |boundary|");
  std::vector<double> log_zeta(zeta.size());
  for (std::size_t i = 0; i < zeta.size(); ++i) {
    if (!(zeta[i] > 0.0)) throw Error("minimize_phi1: boundary values must be positive");
    log_zeta[i] = std::log(zeta[i]);
  }
  const std::vector<double> u = newton_phi1_log(g, log_zeta, std::min(tol, 1e-13));
  std::vector<SpdMatrix> values;
  values.reserve(u.size());
  for (double uv : u) values.push_back(SpdMatrix::scalar(1, std::exp(uv)));
  return finish_result(g, std::move(values));
}

MinimizerResult minimize_Phi(const Dag& g, const BoundaryAssignment& z, double tol) {
  if (z.values().size() != g.boundary().size()) throw Error("minimize_Phi: |z| != |boundary|");
  const int d = z.values().front().dim();

  if (z.all_scalar()) {
    std::vector<double> zeta;
    for (const auto& m : z.values()) zeta.push_back(m(0, 0));
    std::vector<double> log_zeta;
    for (double c : zeta) log_zeta.push_back(std::log(c));
    const std::vector<double> u = newton_phi1_log(g, log_zeta, std::min(tol, 1e-13));
    std::vector<SpdMatrix> values;
    for (double uv : u) values.push_back(SpdMatrix::scalar(d, std::exp(uv)));
    return finish_result(g, std::move(values));
  }

  if (z.all_diagonal()) {
    // d independent scalar problems, one per diagonal coordinate.
    std::vector<std::vector<double>> log_u(d);
    for (int c = 0; c < d; ++c) {
      std::vector<double> log_zeta;
      for (const auto& m : z.values()) log_zeta.push_back(std::log(m(c, c)));
      log_u[c] = newton_phi1_log(g, log_zeta, std::min(tol, 1e-13));
    }
    std::vector<SpdMatrix> values;
    for (int v = 0; v < g.vertex_count(); ++v) {
      Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
      for (int c = 0; c < d; ++c) m(c, c) = std::exp(log_u[c][v]);
      values.emplace_back(m);
    }
    return finish_result(g, std::move(values));
  }

  throw Error("minimize_Phi: boundary must be all-scalar or all-diagonal; "
              "use minimize_Phi_experimental for general SPD data (non-certified)");
}

std::vector<SpdMatrix> minimize_Phi_experimental(const Dag& g, const BoundaryAssignment& z,
                                                 double tol, int max_iter) {
  const int d = z.values().front().dim();
  std::vector<SymMatrix> u(g.vertex_count(), SymMatrix::zero(d));
  for (std::size_t b = 0; b < g.boundary().size(); ++b) u[g.boundary()[b]] = log_spd(z.values()[b]);

  // Gradient descent on phi_d in log coordinates, finite differences per
  // free symmetric coordinate; backtracking step.
  const auto coords = tri_coords(d);
  double step = 0.1;
  double f = energy_phi(u, g);
  for (int iter = 0; iter < max_iter; ++iter) {
    std::vector<SymMatrix> grad(g.vertex_count(), SymMatrix::zero(d));
    double gmax = 0.0;
    const double h = 1e-6;
    for (int v : g.free_vertices()) {
      Eigen::MatrixXd gm = Eigen::MatrixXd::Zero(d, d);
      for (const auto& [i, j] : coords) {
        std::vector<SymMatrix> up = u;
        Eigen::MatrixXd m = u[v].mat();
        m(i, j) += h;
        m(j, i) = m(i, j);
        up[v] = SymMatrix(m);
        const double df = (energy_phi(up, g) - f) / h;
        gm(i, j) = df;
        gm(j, i) = df;
      }
      grad[v] = SymMatrix(gm);
      gmax = std::max(gmax, gm.cwiseAbs().maxCoeff());
    }
    if (gmax < tol) break;
    for (int ls = 0; ls < 40; ++ls) {
      std::vector<SymMatrix> trial = u;
      for (int v : g.free_vertices()) trial[v] = SymMatrix(u[v].mat() - step * grad[v].mat());
      const double ft = energy_phi(trial, g);
      if (ft < f) {
        u = trial;
        f = ft;
        step *= 1.2;
        break;
      }
      step *= 0.5;
    }
  }
  std::vector<SpdMatrix> x;
  x.reserve(u.size());
  for (const auto& uv : u) x.push_back(exp_sym(uv));
  return x;
}

double laplace_log_rhs(const Dag& g, const MinimizerResult& m, double g_at_min, double k) {
  if (!(g_at_min > 0.0)) throw Error("laplace_log_rhs: requires g(m) > 0");
  const int d = m.values.front().dim();
  double log_mu_factor = 0.0;  // mu-to-Lebesgue density at the minimiser
  for (int v : g.free_vertices()) log_mu_factor -= 0.5 * (d + 1) * logdet(m.values[v]);
  const double nf = static_cast<double>(g.free_vertices().size());
  return std::log(g_at_min) - 0.5 * m.log_det_hessian + log_mu_factor +
         nf * d * (d + 1) / 4.0 * std::log(2.0 * std::numbers::pi / k) - k * m.energy;
}

LaplaceCheck laplace_integral(const Dag& g, const BoundaryAssignment& z,
                              const std::function<double(const std::vector<SpdMatrix>&)>& gfun,
                              double k, RngStream& rng, long mc_budget) {
  if (!z.all_scalar()) throw Error("laplace_integral: scalar boundary only");
  const int d = z.values().front().dim();
  const MinimizerResult m = minimize_Phi(g, z);
  const double g_at_min = gfun(m.values);
  if (g_at_min == 0.0) throw Error("laplace_integral: g vanishes at the minimiser");

  LaplaceCheck out;
  out.log_rhs = laplace_log_rhs(g, m, g_at_min, k);

  const auto& free = g.free_vertices();
  const double phi_min = m.energy;

  if (d == 1 && free.size() <= 2) {
    out.method = "quadrature";
    std::vector<SpdMatrix> x = m.values;
    if (free.size() == 1) {
      const double val = quad::mu_d1(
          [&](double t) {
            x[free[0]] = SpdMatrix::scalar(1, t);
            return gfun(x) * std::exp(-k * (energy_Phi(x, g) - phi_min));
          },
          1e-11);
      out.log_lhs = std::log(val) - k * phi_min;
    } else {
      const double val = quad::mu_d1(
          [&](double t0) {
            std::vector<SpdMatrix> xx = x;
            xx[free[0]] = SpdMatrix::scalar(1, t0);
            return quad::mu_d1(
                [&](double t1) {
                  xx[free[1]] = SpdMatrix::scalar(1, t1);
                  return gfun(xx) * std::exp(-k * (energy_Phi(xx, g) - phi_min));
                },
                1e-10);
          },
          1e-9);
      out.log_lhs = std::log(val) - k * phi_min;
    }
    return out;
  }

  // Importance sampling in log coordinates around the minimiser.
  out.method = "importance-sampling";
  const auto coords = tri_coords(d);
  const double sigma = 1.5 / std::sqrt(k);
  std::vector<double> ws;
  ws.reserve(mc_budget);
  for (long it = 0; it < mc_budget; ++it) {
    std::vector<SpdMatrix> x = m.values;
    double log_q = 0.0;
    double log_target = 0.0;
    for (int v : free) {
      Eigen::MatrixXd s = Eigen::MatrixXd::Zero(d, d);
      for (const auto& [i, j] : coords) {
        const double n = rng.normal() * sigma;
        s(i, j) = n;
        s(j, i) = n;
        log_q += -0.5 * n * n / (sigma * sigma) - std::log(sigma) - 0.5 * std::log(2.0 * std::numbers::pi);
      }
      const SymMatrix u(log_spd(m.values[v]).mat() + s);
      x[v] = exp_sym(u);
      log_target += -0.5 * (d + 1) * u.mat().trace() + log_dexp_jacobian(u);
    }
    const double gv = gfun(x);
    const double lw = std::log(std::abs(gv) + 1e-300) - k * (energy_Phi(x, g) - phi_min) + log_target - log_q;
    ws.push_back((gv >= 0.0 ? 1.0 : -1.0) * std::exp(lw));
  }
  const auto est = stats::mean_se(ws);
  out.log_lhs = std::log(est.mean) - k * phi_min;
  out.lhs_rel_se = est.se / est.mean;
  return out;
}

}  // namespace mw::energy
