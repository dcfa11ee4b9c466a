#pragma once

#include <cstddef>

namespace mw {

// Monte-Carlo estimate kept in the log domain: exp(log_value) is the
// estimated quantity, rel_se its relative standard error, ess the
// effective sample size of the weights behind it.
struct Estimate {
  double log_value = 0.0;
  double rel_se = 0.0;
  double ess = 0.0;

  bool reliable(double min_ess_fraction, std::size_t budget) const {
    return ess >= min_ess_fraction * static_cast<double>(budget);
  }
};

}  // namespace mw
