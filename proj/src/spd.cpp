#include "mw/spd.hpp"

#include <cmath>

namespace mw {

namespace {

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m) {
  return 0.5 * (m + m.transpose());
}

void require_square(const Eigen::MatrixXd& m, const char* who) {
  if (m.rows() != m.cols()) throw DimensionMismatchError(std::string(who) + ": matrix must be square");
  if (m.rows() == 0) throw DimensionMismatchError(std::string(who) + ": empty matrix");
}

// Applies f to the eigenvalues of a and reassembles; result symmetrised.
template <typename F>
Eigen::MatrixXd eigen_map(const SpdMatrix& a, F&& f) {
  const SymEigen e = sym_eigen(a.mat());
  Eigen::VectorXd mapped(e.values.size());
  for (int i = 0; i < mapped.size(); ++i) mapped[i] = f(e.values[i]);
  return symmetrize(e.vectors * mapped.asDiagonal() * e.vectors.transpose());
}

}  // namespace

SymEigen sym_eigen(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetrize(m));
  if (solver.info() != Eigen::Success) throw Error("sym_eigen: eigendecomposition failed");
  return SymEigen{solver.eigenvalues(), solver.eigenvectors()};
}

SymMatrix::SymMatrix(Eigen::MatrixXd m) {
  require_square(m, "SymMatrix");
  m_ = symmetrize(m);
}

SpdMatrix::SpdMatrix(Eigen::MatrixXd m, double rel_tol) {
  require_square(m, "SpdMatrix");
  m_ = symmetrize(m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m_, Eigen::EigenvaluesOnly);
  const double lo = solver.eigenvalues().minCoeff();
  const double hi = solver.eigenvalues().maxCoeff();
  if (!(lo > rel_tol * hi) || !(hi > 0.0)) {
    throw NotPositiveDefiniteError(
        "SpdMatrix: not positive definite (min eigenvalue " + std::to_string(lo) +
            ", max eigenvalue " + std::to_string(hi) + ")",
        lo, hi);
  }
}

PsdMatrix::PsdMatrix(Eigen::MatrixXd m, double rel_tol) {
  require_square(m, "PsdMatrix");
  m_ = symmetrize(m);
  if (m_.isZero(0.0)) return;
  const SymEigen e = sym_eigen(m_);
  const double lo = e.values.minCoeff();
  const double hi = e.values.maxCoeff();
  if (!(lo >= -rel_tol * hi)) {
    throw NotPositiveDefiniteError(
        "PsdMatrix: not positive semidefinite (min eigenvalue " + std::to_string(lo) + ")", lo, hi);
  }
  if (lo < 0.0) {
    Eigen::VectorXd clamped = e.values.cwiseMax(0.0);
    m_ = symmetrize(e.vectors * clamped.asDiagonal() * e.vectors.transpose());
  }
}

bool is_positive_definite(const Eigen::MatrixXd& m, double rel_tol) {
  if (m.rows() != m.cols() || m.rows() == 0) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetrize(m), Eigen::EigenvaluesOnly);
  const double lo = solver.eigenvalues().minCoeff();
  const double hi = solver.eigenvalues().maxCoeff();
  return lo > rel_tol * hi && hi > 0.0;
}

SpdMatrix sqrt_spd(const SpdMatrix& a) {
  return SpdMatrix(eigen_map(a, [](double x) { return std::sqrt(x); }));
}

SymMatrix log_spd(const SpdMatrix& a) {
  return SymMatrix(eigen_map(a, [](double x) { return std::log(x); }));
}

SpdMatrix exp_sym(const SymMatrix& a) {
  const SymEigen e = sym_eigen(a.mat());
  Eigen::VectorXd mapped = e.values.array().exp();
  return SpdMatrix(e.vectors * mapped.asDiagonal() * e.vectors.transpose());
}

SpdMatrix inv_spd(const SpdMatrix& a) {
  const SymEigen e = sym_eigen(a.mat());
  const double cond = e.values.maxCoeff() / e.values.minCoeff();
  if (!(cond < 1e14)) {
    throw NotPositiveDefiniteError("inv_spd: condition number " + std::to_string(cond) + " too large",
                                   e.values.minCoeff(), e.values.maxCoeff());
  }
  Eigen::VectorXd mapped = e.values.cwiseInverse();
  return SpdMatrix(e.vectors * mapped.asDiagonal() * e.vectors.transpose());
}

SpdMatrix sym_mult(const SpdMatrix& y, const SpdMatrix& x) {
  if (y.dim() != x.dim()) throw DimensionMismatchError("sym_mult: dimension mismatch");
  const Eigen::MatrixXd r = sqrt_spd(y).mat();
  return SpdMatrix(r * x.mat() * r);
}

SpdMatrix add(const SpdMatrix& a, const SpdMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionMismatchError("add: dimension mismatch");
  return SpdMatrix(a.mat() + b.mat());
}

double logdet(const SpdMatrix& a) {
  const Eigen::LLT<Eigen::MatrixXd> llt(a.mat());
  if (llt.info() != Eigen::Success) {
    // Tolerance-level indefiniteness; fall back to eigenvalues.
    const SymEigen e = sym_eigen(a.mat());
    return e.values.array().log().sum();
  }
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

double mu_log_density(const SpdMatrix& x) {
  return -0.5 * (x.dim() + 1) * logdet(x);
}

double log_dexp_jacobian(const SymMatrix& u) {
  const SymEigen e = sym_eigen(u.mat());
  const int d = u.dim();
  double acc = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      const double mean = 0.5 * (e.values[i] + e.values[j]);
      const double h = 0.5 * (e.values[i] - e.values[j]);
      // (e^a - e^b)/(a - b) = e^{(a+b)/2} * sinh(h)/h
      const double sinhc = (std::abs(h) < 1e-5) ? 1.0 + h * h / 6.0 : std::sinh(h) / h;
      acc += mean + std::log(sinhc);
    }
  }
  return acc;
}

double trace_of_product(const Eigen::MatrixXd& a, const SpdMatrix& b) {
  if (a.rows() != b.dim() || a.cols() != b.dim()) {
    throw DimensionMismatchError("trace_of_product: dimension mismatch");
  }
  const Eigen::LLT<Eigen::MatrixXd> llt(b.mat());
  if (llt.info() != Eigen::Success) throw Error("trace_of_product: Cholesky failed");
  return llt.solve(a).trace();
}

}  // namespace mw
