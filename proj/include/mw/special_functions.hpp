#pragma once

#include <complex>

namespace mw {

// Digamma psi(x) for x > 0, asymptotic series after recurrence shift.
double digamma(double x);

// log Gamma on the half-plane Re(z) > 0 (Lanczos).
std::complex<double> log_gamma(std::complex<double> z);

// d-variate gamma function in log form,
//   log Gamma_d(a) = (d(d-1)/4) log pi + sum_{k=1}^{d} log Gamma(a - (k-1)/2),
// defined for Re(a) > (d-1)/2.
double log_multigamma(int d, double a);
std::complex<double> log_multigamma(int d, std::complex<double> a);

// Regularized lower incomplete gamma P(a,x) and its complement Q(a,x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Survival function of the Kolmogorov distribution,
//   Q(x) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 x^2).
double kolmogorov_q(double x);

// log K_nu(x) for x > 0, any real nu (K is even in nu); switches to the
// large-x and small-x expansions where the library Bessel under/overflows.
double log_bessel_k(double nu, double x);

}  // namespace mw
