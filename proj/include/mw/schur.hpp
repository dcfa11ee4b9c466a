#pragma once

#include <vector>

namespace mw::schur {

// Integer partition, weakly decreasing parts, trailing zeros stripped.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<int> parts);

  const std::vector<int>& parts() const { return parts_; }
  int size() const;    // sum of parts
  int length() const { return static_cast<int>(parts_.size()); }
  int part(int i) const { return i < length() ? parts_[i] : 0; }  // 0-based, padded

  bool operator==(const Partition& o) const { return parts_ == o.parts_; }

  // Interlacing *this = mu with lam: lam_i >= mu_i >= lam_{i+1}.
  bool interlaced_below(const Partition& lam) const;

 private:
  std::vector<int> parts_;
};

// Schur polynomial via the branching recursion over interlacing partitions;
// zero when the partition is longer than the variable list. Memoised.
double schur_poly(const Partition& lam, const std::vector<double>& x);

struct TruncatedCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double tail_bound = 0.0;
};

// Pieri identity sum_{lam > mu} s_lam = prod (1-x_i)^{-1} s_mu, truncated to
// lam_1 <= mu_1 + max_growth, with a certified geometric tail bound.
// Requires max |x_i| < 1.
TruncatedCheck pieri_check(const Partition& mu, const std::vector<double>& x, int max_growth);

// Cauchy-Littlewood sum_{|lam| <= max_size} s_lam(x) s_lam(y) against
// prod (1 - x_l y_i)^{-1}; rejects any |x_l y_i| >= 1.
TruncatedCheck cauchy_littlewood_check(const std::vector<double>& x, const std::vector<double>& y,
                                       int max_size);

}  // namespace mw::schur
