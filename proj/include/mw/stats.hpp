#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace mw::stats {

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// Two-sample Kolmogorov-Smirnov with asymptotic p-value.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

// One-sample KS of `a` against a fully specified CDF.
KsResult ks_against_cdf(std::vector<double> a, const std::function<double(double)>& cdf);

// Survival function of the chi-squared distribution.
double chi2_sf(double x, int dof);

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
  std::size_t n = 0;
};

MeanSe mean_se(const std::vector<double>& xs);

}  // namespace mw::stats
