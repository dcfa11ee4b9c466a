#include "mw/schur.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>

namespace mw::schur {

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
  for (std::size_t i = 0; i + 1 < parts_.size(); ++i) {
    if (parts_[i] < parts_[i + 1]) throw std::invalid_argument("Partition: parts must decrease");
  }
  for (int p : parts_) {
    if (p < 0) throw std::invalid_argument("Partition: negative part");
  }
  while (!parts_.empty() && parts_.back() == 0) parts_.pop_back();
}

int Partition::size() const {
  int s = 0;
  for (int p : parts_) s += p;
  return s;
}

bool Partition::interlaced_below(const Partition& lam) const {
  const int len = std::max(length(), lam.length());
  for (int i = 0; i < len; ++i) {
    if (!(lam.part(i) >= part(i) && part(i) >= lam.part(i + 1))) return false;
  }
  return true;
}

namespace {

// Enumerates all mu interlaced below lam: mu_i in [lam_{i+1}, lam_i].
template <typename F>
void for_each_interlacing_below(const Partition& lam, F&& f) {
  const int len = lam.length();
  std::vector<int> mu(len, 0);
  std::function<void(int)> rec = [&](int i) {
    if (i == len) {
      f(Partition(std::vector<int>(mu.begin(), mu.begin() + len)));
      return;
    }
    for (int v = lam.part(i + 1); v <= lam.part(i); ++v) {
      mu[i] = v;
      rec(i + 1);
    }
  };
  rec(0);
}

// Enumerates all lam interlaced above mu with lam_1 <= cap.
template <typename F>
void for_each_interlacing_above(const Partition& mu, int cap, F&& f) {
  const int len = mu.length() + 1;
  std::vector<int> lam(len, 0);
  std::function<void(int)> rec = [&](int i) {
    if (i == len) {
      f(Partition(lam));
      return;
    }
    const int lo = mu.part(i);
    const int hi = (i == 0) ? cap : mu.part(i - 1);
    for (int v = lo; v <= hi; ++v) {
      lam[i] = v;
      rec(i + 1);
    }
  };
  rec(0);
}

using Memo = std::map<std::pair<int, std::vector<int>>, double>;

double schur_rec(const Partition& lam, const std::vector<double>& x, int n, Memo& memo) {
  if (lam.length() > n) return 0.0;
  if (n == 1) return std::pow(x[0], lam.size());
  const auto key = std::make_pair(n, lam.parts());
  if (const auto it = memo.find(key); it != memo.end()) return it->second;
  double s = 0.0;
  for_each_interlacing_below(lam, [&](const Partition& mu) {
    s += std::pow(x[n - 1], lam.size() - mu.size()) * schur_rec(mu, x, n - 1, memo);
  });
  memo[key] = s;
  return s;
}

}  // namespace

double schur_poly(const Partition& lam, const std::vector<double>& x) {
  if (x.empty()) return lam.length() == 0 ? 1.0 : 0.0;
  Memo memo;
  return schur_rec(lam, x, static_cast<int>(x.size()), memo);
}

TruncatedCheck pieri_check(const Partition& mu, const std::vector<double>& x, int max_growth) {
  double rho = 0.0;
  for (double xi : x) rho = std::max(rho, std::abs(xi));
  if (!(rho < 1.0)) throw std::invalid_argument("pieri_check: requires max |x_i| < 1");

  TruncatedCheck out;
  for_each_interlacing_above(mu, mu.part(0) + max_growth,
                             [&](const Partition& lam) { out.lhs += schur_poly(lam, x); });
  double prod = 1.0;
  for (double xi : x) prod /= (1.0 - xi);
  out.rhs = prod * schur_poly(mu, x);

  // Dropped terms have |lam| - |mu| > max_growth. For any theta in (rho, 1):
  //   sum_{|lam|-|mu| > g} s_lam(|x|) <= theta^{g+1} sum_lam s_lam(|x|/theta)
  // and the full sum has the closed Pieri value at |x|/theta. Each theta
  // certifies a bound; take the best of a few.
  double best = std::numeric_limits<double>::infinity();
  for (int j = 1; j <= 20; ++j) {
    const double theta = rho + (1.0 - rho) * j / 21.0;
    std::vector<double> scaled;
    double prod_scaled = 1.0;
    for (double xi : x) {
      scaled.push_back(std::abs(xi) / theta);
      prod_scaled /= (1.0 - std::abs(xi) / theta);
    }
    best = std::min(best,
                    std::pow(theta, max_growth + 1) * prod_scaled * schur_poly(mu, scaled));
  }
  out.tail_bound = best;
  return out;
}

TruncatedCheck cauchy_littlewood_check(const std::vector<double>& x, const std::vector<double>& y,
                                       int max_size) {
  double rho = 0.0;
  for (double xl : x)
    for (double yi : y) rho = std::max(rho, std::abs(xl * yi));
  if (!(rho < 1.0)) throw std::invalid_argument("cauchy_littlewood_check: requires |x_l y_i| < 1");

  TruncatedCheck out;
  const int max_len = static_cast<int>(std::min(x.size(), y.size()));

  // enumerate partitions of size <= max_size and length <= max_len
  std::vector<int> parts;
  std::function<void(int, int)> rec = [&](int remaining, int cap) {
    out.lhs += schur_poly(Partition(parts), x) * schur_poly(Partition(parts), y);
    if (static_cast<int>(parts.size()) == max_len) return;
    for (int v = 1; v <= std::min(remaining, cap); ++v) {
      parts.push_back(v);
      rec(remaining - v, v);
      parts.pop_back();
    }
  };
  rec(max_size, max_size);

  out.rhs = 1.0;
  for (double xl : x)
    for (double yi : y) out.rhs /= (1.0 - xl * yi);

  // s_lam(x) s_lam(y) = theta^{|lam|} s_lam(x/theta) s_lam(y); summing the
  // dropped sizes gives a geometric bound at the rescaled product. Each
  // theta in (rho, 1) certifies a bound; take the best of a few.
  double best = std::numeric_limits<double>::infinity();
  for (int j = 1; j <= 20; ++j) {
    const double theta = rho + (1.0 - rho) * j / 21.0;
    double prod_scaled = 1.0;
    for (double xl : x)
      for (double yi : y) prod_scaled /= (1.0 - std::abs(xl * yi) / theta);
    best = std::min(best, std::pow(theta, max_size + 1) * prod_scaled);
  }
  out.tail_bound = best;
  return out;
}

}  // namespace mw::schur
