#include "mw/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mw {

double digamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("digamma: requires x > 0");
  double result = 0.0;
  while (x < 6.0) {  // shift into the asymptotic regime
    result -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // psi(x) ~ log x - 1/(2x) - sum B_{2n}/(2n x^{2n})
  result += std::log(x) - 0.5 * inv;
  result -= inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0)))));
  return result;
}

std::complex<double> log_gamma(std::complex<double> z) {
  if (!(z.real() > 0.0)) throw std::domain_error("log_gamma: requires Re(z) > 0");
  // Lanczos, g = 7, 9 coefficients.
  static const double c[9] = {
      0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
      771.32342877765313,   -176.61502916214059,   12.507343278686905,
      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  const std::complex<double> zm1 = z - 1.0;
  std::complex<double> acc = c[0];
  for (int i = 1; i < 9; ++i) acc += c[i] / (zm1 + static_cast<double>(i));
  const std::complex<double> t = zm1 + 7.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (zm1 + 0.5) * std::log(t) - t + std::log(acc);
}

double log_multigamma(int d, double a) {
  if (!(a > 0.5 * (d - 1))) throw std::domain_error("log_multigamma: requires a > (d-1)/2");
  double s = 0.25 * d * (d - 1) * std::log(std::numbers::pi);
  for (int k = 1; k <= d; ++k) s += std::lgamma(a - 0.5 * (k - 1));
  return s;
}

std::complex<double> log_multigamma(int d, std::complex<double> a) {
  if (!(a.real() > 0.5 * (d - 1))) throw std::domain_error("log_multigamma: requires Re(a) > (d-1)/2");
  std::complex<double> s = 0.25 * d * (d - 1) * std::log(std::numbers::pi);
  for (int k = 1; k <= d; ++k) s += log_gamma(a - 0.5 * (k - 1));
  return s;
}

namespace {

// Series expansion of P(a,x), valid for x < a+1.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < 500; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a,x), valid for x >= a+1 (Lentz).
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_p(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw std::domain_error("gamma_p: requires a > 0, x >= 0");
  if (x == 0.0) return 0.0;
  return (x < a + 1.0) ? gamma_p_series(a, x) : 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw std::domain_error("gamma_q: requires a > 0, x >= 0");
  if (x == 0.0) return 1.0;
  return (x < a + 1.0) ? 1.0 - gamma_p_series(a, x) : gamma_q_cf(a, x);
}

double log_bessel_k(double nu, double x) {
  nu = std::abs(nu);
  if (!(x > 0.0)) throw std::domain_error("log_bessel_k: requires x > 0");
  if (x < 500.0) {
    const double v = std::cyl_bessel_k(nu, x);
    if (std::isfinite(v) && v > 0.0) return std::log(v);
    // overflow at small x with nu > 0: K_nu(x) ~ Gamma(nu)/2 (2/x)^nu
    if (x < 1.0 && nu > 0.0) {
      return std::lgamma(nu) - std::log(2.0) + nu * (std::log(2.0) - std::log(x));
    }
  }
  // large-x expansion
  const double mu = 4.0 * nu * nu;
  const double c1 = (mu - 1.0) / (8.0 * x);
  const double c2 = (mu - 1.0) * (mu - 9.0) / (2.0 * 64.0 * x * x);
  const double c3 = (mu - 1.0) * (mu - 9.0) * (mu - 25.0) / (6.0 * 512.0 * x * x * x);
  return 0.5 * std::log(std::numbers::pi / (2.0 * x)) - x + std::log1p(c1 + c2 + c3);
}

double kolmogorov_q(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 0.2) return 1.0;  // indistinguishable from 1
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 == 1) ? term : -term;
    if (term < 1e-18) break;
  }
  const double q = 2.0 * sum;
  return std::min(1.0, std::max(0.0, q));
}

}  // namespace mw
