#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <vector>

#include "mw/rng.hpp"
#include "mw/triangular.hpp"

namespace mw::kernels {

using Cplx = std::complex<double>;

// Log density value; -infinity encodes a support violation (an indicator
// failing), never numerical underflow.
struct LogDensity {
  double value = 0.0;

  static LogDensity rejected() { return {-std::numeric_limits<double>::infinity()}; }
  bool in_support() const { return value != -std::numeric_limits<double>::infinity(); }
};

// log K^N_b(z; y) for z of length N >= 2, y of length N-1; density w.r.t.
// mu^{(N-1)}(dy).
Cplx log_K(Cplx b, const MatrixVector& z, const MatrixVector& y);
LogDensity log_K(double b, const MatrixVector& z, const MatrixVector& y);

// log P^N_a(z; zt), density w.r.t. mu^{(N)}(dzt).
Cplx log_P(Cplx a, const MatrixVector& z, const MatrixVector& zt);
LogDensity log_P(double a, const MatrixVector& z, const MatrixVector& zt);

// Exact draw from the renormalised one-particle kernel P-bar^1_a(z; .),
// realised as T_z(W) with W inverse Wishart(a); this is the random walk
// transition.
SpdMatrix sample_P1_norm(double a, const SpdMatrix& z, RngStream& rng);

// log Q^N_a(y, yt, z; zt) with the conventions y_0^{-1} = 0, yt_N = 0
// applied internally; -infinity when some zt_j^{-1} - y_{j-1}^{-1} is not
// positive definite. y and yt have length N-1, z and zt length N.
Cplx log_Q(Cplx a, const MatrixVector& y, const MatrixVector& yt, const MatrixVector& z,
           const MatrixVector& zt);
LogDensity log_Q(double a, const MatrixVector& y, const MatrixVector& yt, const MatrixVector& z,
                 const MatrixVector& zt);

// Exact draw from Q-bar^N_a(y, yt, z; .), the row-N update of the triangular
// dynamic driven by i.i.d. inverse Wishart(a) innovations.
MatrixVector sample_Q_norm(double a, const MatrixVector& y, const MatrixVector& yt,
                           const MatrixVector& z, RngStream& rng);

// log Sigma^N_lambda(z; x_inner) = log Delta - Phi of the concatenated
// array; equals the recursive chain of K kernels.
Cplx log_Sigma(const std::vector<Cplx>& lambda, const MatrixVector& z, const TriangularArray& x_inner);

// log Lambda^N_{a,b}(y, z; yt, zt) = log P^{N-1}_a(y; yt) + log Q^N_{a+b}(y, yt, z; zt).
Cplx log_Lambda(Cplx a, Cplx b, const MatrixVector& y, const MatrixVector& z, const MatrixVector& yt,
                const MatrixVector& zt);

// Doob-transformed kernel: log P^N_a(z; zt) + log psi(zt) - log psi(z)
// - sum_i log Gamma_d(a + lambda_i); log_psi supplies log psi^N_lambda.
LogDensity log_P_doob(double a, const std::vector<double>& lambda, const MatrixVector& z,
                      const MatrixVector& zt, const std::function<double(const MatrixVector&)>& log_psi);

// Both algebraic routes to K^N_a(z; y): through the P kernel with the extra
// argument s (first relation) and through the one-size-smaller P kernel
// (second relation). All three agree identically; this pins the formulas.
struct PkRelation {
  double log_k;            // direct evaluation
  double via_P_with_s;     // |s|^{-a} e^{tr[s z_N^{-1}]} P^N_a((y,s); z)
  double via_P_reduced;    // |z_N|^{-a} e^{-tr[z_N y_{N-1}^{-1}]} P^{N-1}_a(y; z_{1:N-1})
};
PkRelation log_relation_PK_check(double a, const MatrixVector& z, const MatrixVector& y,
                                 const SpdMatrix& s);

}  // namespace mw::kernels
