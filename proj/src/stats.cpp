#include "mw/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mw/special_functions.hpp"

namespace mw::stats {

namespace {

double ks_p_value(double d, double n_eff) {
  const double sqrt_n = std::sqrt(n_eff);
  const double x = (sqrt_n + 0.12 + 0.11 / sqrt_n) * d;
  return kolmogorov_q(x);
}

}  // namespace

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const std::size_t na = a.size(), nb = b.size();
  std::size_t ia = 0, ib = 0;
  double d = 0.0;
  while (ia < na && ib < nb) {
    const double x = std::min(a[ia], b[ib]);
    while (ia < na && a[ia] <= x) ++ia;
    while (ib < nb && b[ib] <= x) ++ib;
    d = std::max(d, std::abs(static_cast<double>(ia) / na - static_cast<double>(ib) / nb));
  }
  const double n_eff = static_cast<double>(na) * nb / static_cast<double>(na + nb);
  return {d, ks_p_value(d, n_eff)};
}

KsResult ks_against_cdf(std::vector<double> a, const std::function<double(double)>& cdf) {
  if (a.empty()) throw std::invalid_argument("ks_against_cdf: empty sample");
  std::sort(a.begin(), a.end());
  const std::size_t n = a.size();
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = cdf(a[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  return {d, ks_p_value(d, static_cast<double>(n))};
}

double chi2_sf(double x, int dof) {
  if (dof <= 0) throw std::invalid_argument("chi2_sf: dof must be positive");
  if (x <= 0.0) return 1.0;
  return gamma_q(0.5 * dof, 0.5 * x);
}

MeanSe mean_se(const std::vector<double>& xs) {
  MeanSe r;
  r.n = xs.size();
  if (r.n == 0) return r;
  double sum = 0.0;
  for (double x : xs) sum += x;
  r.mean = sum / static_cast<double>(r.n);
  if (r.n > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - r.mean) * (x - r.mean);
    r.se = std::sqrt(ss / (static_cast<double>(r.n) * (static_cast<double>(r.n) - 1.0)));
  }
  return r;
}

}  // namespace mw::stats
