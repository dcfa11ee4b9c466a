#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace mw {

// Relative positive-definiteness tolerance: min eigenvalue must exceed
// rel_tol * max eigenvalue. Relative, because long trajectories scale
// matrices across many orders of magnitude.
inline constexpr double kSpdRelTol = 1e-12;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatchError : Error {
  using Error::Error;
};

struct NotPositiveDefiniteError : Error {
  NotPositiveDefiniteError(const std::string& what, double min_eig, double max_eig)
      : Error(what), min_eigenvalue(min_eig), max_eigenvalue(max_eig) {}
  double min_eigenvalue;
  double max_eigenvalue;
};

struct SymEigen {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // orthonormal columns
};

// Eigendecomposition of a (symmetrised) matrix.
SymEigen sym_eigen(const Eigen::MatrixXd& m);

// Real symmetric d x d matrix; entries are stored exactly symmetrised.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(Eigen::MatrixXd m);

  static SymMatrix zero(int d) { return SymMatrix(Eigen::MatrixXd::Zero(d, d)); }

  int dim() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXd& mat() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

 private:
  Eigen::MatrixXd m_;
};

// Symmetric positive definite d x d matrix. Construction validates
// min eig > rel_tol * max eig and stores the symmetrised entries.
class SpdMatrix {
 public:
  SpdMatrix() = default;
  explicit SpdMatrix(Eigen::MatrixXd m, double rel_tol = kSpdRelTol);

  static SpdMatrix identity(int d) { return SpdMatrix(Eigen::MatrixXd::Identity(d, d)); }
  static SpdMatrix scalar(int d, double c) { return SpdMatrix(c * Eigen::MatrixXd::Identity(d, d)); }

  int dim() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXd& mat() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

 private:
  Eigen::MatrixXd m_;
};

// Symmetric positive semidefinite matrix; eigenvalues in
// [-rel_tol * max, 0) are clamped to zero. Admits the zero matrix, which
// the edge recursions need for step initial configurations (the
// x^i_0^{-1} = 0 conventions are handled at call sites, never by
// pseudo-inverses).
class PsdMatrix {
 public:
  PsdMatrix() = default;
  explicit PsdMatrix(Eigen::MatrixXd m, double rel_tol = kSpdRelTol);
  PsdMatrix(const SpdMatrix& m) : m_(m.mat()) {}  // NOLINT: widening is safe

  static PsdMatrix zero(int d) { return PsdMatrix(Eigen::MatrixXd::Zero(d, d)); }

  int dim() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXd& mat() const { return m_; }
  bool is_zero() const { return m_.isZero(0.0); }

  // Checked narrowing; throws NotPositiveDefiniteError if singular.
  SpdMatrix as_spd(double rel_tol = kSpdRelTol) const { return SpdMatrix(m_, rel_tol); }

 private:
  Eigen::MatrixXd m_;
};

// True iff the symmetrised matrix has min eig > rel_tol * max eig.
bool is_positive_definite(const Eigen::MatrixXd& m, double rel_tol = kSpdRelTol);

// Unique SPD square root, r * r = a.
SpdMatrix sqrt_spd(const SpdMatrix& a);

// Matrix logarithm / exponential; mutually inverse bijections between
// the SPD cone and the symmetric matrices.
SymMatrix log_spd(const SpdMatrix& a);
SpdMatrix exp_sym(const SymMatrix& a);

// Inverse; rejects condition numbers above 1e14.
SpdMatrix inv_spd(const SpdMatrix& a);

// Symmetrised product T_y(x) = y^{1/2} x y^{1/2}.
SpdMatrix sym_mult(const SpdMatrix& y, const SpdMatrix& x);

SpdMatrix add(const SpdMatrix& a, const SpdMatrix& b);

double logdet(const SpdMatrix& a);

// Log density of the GL_d-invariant measure mu(dx) = |x|^{-(d+1)/2} dx
// relative to Lebesgue measure on the upper-triangular entries.
double mu_log_density(const SpdMatrix& x);

// log determinant of the differential of the matrix exponential at u, as a
// linear map on symmetric matrices: sum over i <= j of the divided
// differences (e^{l_i} - e^{l_j}) / (l_i - l_j) of the eigenvalues of u.
double log_dexp_jacobian(const SymMatrix& u);

// tr[a b^{-1}] via a Cholesky solve, not an explicit inverse.
double trace_of_product(const Eigen::MatrixXd& a, const SpdMatrix& b);
inline double trace_of_product(const SpdMatrix& a, const SpdMatrix& b) {
  return trace_of_product(a.mat(), b);
}
inline double trace_of_product(const PsdMatrix& a, const SpdMatrix& b) {
  return trace_of_product(a.mat(), b);
}

}  // namespace mw
