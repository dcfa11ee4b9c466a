// Shared oracle helpers for the test suites: independent, grid-based
// constructions kept deliberately separate from the library code paths they
// are used to check.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace test_oracles {

// Builds a CDF for a d=1 density given as log f(x) w.r.t. dx/x, by
// cumulative trapezoid on a uniform grid in u = log x. The grid expands
// around the peak until the integrand drops 60 e-folds.
class GridCdf {
 public:
  GridCdf(const std::function<double(double)>& log_f, double u_guess = 0.0, int points = 6000) {
    double u_peak = u_guess;
    double best = log_f(std::exp(u_peak));
    for (double u = u_guess - 30.0; u <= u_guess + 30.0; u += 0.05) {
      const double v = log_f(std::exp(u));
      if (v > best) {
        best = v;
        u_peak = u;
      }
    }
    double lo = u_peak, hi = u_peak;
    while (log_f(std::exp(lo)) > best - 60.0) lo -= 0.25;
    while (log_f(std::exp(hi)) > best - 60.0) hi += 0.25;

    us_.resize(points);
    cdf_.resize(points);
    const double h = (hi - lo) / (points - 1);
    std::vector<double> f(points);
    for (int i = 0; i < points; ++i) {
      us_[i] = lo + i * h;
      f[i] = std::exp(log_f(std::exp(us_[i])) - best);
    }
    cdf_[0] = 0.0;
    for (int i = 1; i < points; ++i) cdf_[i] = cdf_[i - 1] + 0.5 * (f[i] + f[i - 1]) * h;
    const double total = cdf_.back();
    if (!(total > 0.0)) throw std::runtime_error("GridCdf: vanishing mass");
    for (double& c : cdf_) c /= total;
    log_norm_ = best + std::log(total);
  }

  double operator()(double x) const {
    const double u = std::log(x);
    if (u <= us_.front()) return 0.0;
    if (u >= us_.back()) return 1.0;
    const auto it = std::upper_bound(us_.begin(), us_.end(), u);
    const std::size_t i = static_cast<std::size_t>(it - us_.begin());
    const double t = (u - us_[i - 1]) / (us_[i] - us_[i - 1]);
    return cdf_[i - 1] + t * (cdf_[i] - cdf_[i - 1]);
  }

  // Inverse CDF by bisection on the grid.
  double quantile(double p) const {
    const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), p);
    std::size_t i = static_cast<std::size_t>(it - cdf_.begin());
    if (i == 0) i = 1;
    if (i >= cdf_.size()) i = cdf_.size() - 1;
    const double t = (p - cdf_[i - 1]) / std::max(1e-300, cdf_[i] - cdf_[i - 1]);
    return std::exp(us_[i - 1] + t * (us_[i] - us_[i - 1]));
  }

  double log_normaliser() const { return log_norm_; }

 private:
  std::vector<double> us_, cdf_;
  double log_norm_ = 0.0;
};

}  // namespace test_oracles
