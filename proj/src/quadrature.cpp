#include "mw/quadrature.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace mw::quad {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Log-sum-exp accumulator.
class LogSum {
 public:
  void add(double l) {
    if (l == kNegInf) return;
    if (l > max_) {
      sum_ = sum_ * std::exp(max_ - l) + 1.0;
      max_ = l;
    } else {
      sum_ += std::exp(l - max_);
    }
  }
  double value() const { return (sum_ == 0.0) ? kNegInf : max_ + std::log(sum_); }

 private:
  double max_ = kNegInf;
  double sum_ = 0.0;
};

}  // namespace

double tanh_sinh(const Fn& f, double a, double b, double tol, int max_level) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double t_max = 6.0;

  // Trapezoid sums over t_k = k*h; refinement halves h and adds odd nodes.
  auto node_sum = [&](double h, bool odd_only) {
    double s = 0.0;
    const int k_max = static_cast<int>(t_max / h);
    for (int k = odd_only ? 1 : 0; k <= k_max; k += odd_only ? 2 : 1) {
      const double t = k * h;
      const double ch = std::cosh(kHalfPi * std::sinh(t));
      const double w = kHalfPi * std::cosh(t) / (ch * ch);
      if (!std::isfinite(w) || w < 1e-300) continue;
      const double x = std::tanh(kHalfPi * std::sinh(t));
      const double fp = f(mid + half * x);
      const double fm = f(mid - half * x);
      if (k == 0) {
        s += w * fp;
      } else {
        s += w * (fp + fm);
      }
    }
    return s;
  };

  double h = 1.0;
  double integral = h * node_sum(h, false);
  for (int level = 1; level <= max_level; ++level) {
    h *= 0.5;
    const double refined = 0.5 * integral + h * node_sum(h, true);
    const double err = std::abs(refined - integral);
    integral = refined;
    if (level >= 3 && err <= tol * (std::abs(integral) + 1e-300)) break;
  }
  return half * integral;
}

double real_line(const Fn& f, double tol, int max_level) {
  const double t_max = 2.2;  // |u| <= sinh(pi/2 * sinh 2.2) ~ 5.5e2

  auto node_sum = [&](double h, bool odd_only) {
    double s = 0.0;
    const int k_max = static_cast<int>(t_max / h);
    for (int k = odd_only ? 1 : 0; k <= k_max; k += odd_only ? 2 : 1) {
      const double t = k * h;
      const double u = std::sinh(kHalfPi * std::sinh(t));
      const double w = kHalfPi * std::cosh(t) * std::cosh(kHalfPi * std::sinh(t));
      if (!std::isfinite(w)) continue;
      if (k == 0) {
        s += w * f(u);
      } else {
        s += w * (f(u) + f(-u));
      }
    }
    return s;
  };

  double h = 0.5;
  double integral = h * node_sum(h, false);
  for (int level = 1; level <= max_level; ++level) {
    h *= 0.5;
    const double refined = 0.5 * integral + h * node_sum(h, true);
    const double err = std::abs(refined - integral);
    integral = refined;
    if (level >= 3 && err <= tol * (std::abs(integral) + 1e-300)) break;
  }
  return integral;
}

double real_line_log(const Fn& log_f, double tol, int max_level) {
  const double t_max = 2.2;

  auto level_logsum = [&](double h, bool odd_only) {
    LogSum s;
    const int k_max = static_cast<int>(t_max / h);
    for (int k = odd_only ? 1 : 0; k <= k_max; k += odd_only ? 2 : 1) {
      const double t = k * h;
      const double u = std::sinh(kHalfPi * std::sinh(t));
      const double w = kHalfPi * std::cosh(t) * std::cosh(kHalfPi * std::sinh(t));
      if (!std::isfinite(w)) continue;
      const double log_w = std::log(w);
      s.add(log_f(u) + log_w);
      if (k != 0) s.add(log_f(-u) + log_w);
    }
    return s.value();
  };

  double h = 0.5;
  double log_integral = level_logsum(h, false) + std::log(h);
  for (int level = 1; level <= max_level; ++level) {
    h *= 0.5;
    const double odd = level_logsum(h, true) + std::log(h);
    LogSum combine;
    combine.add(log_integral + std::log(0.5));
    combine.add(odd);
    const double refined = combine.value();
    const double err = std::abs(refined - log_integral);
    log_integral = refined;
    if (log_integral == kNegInf) break;
    if (level >= 3 && err <= tol) break;
  }
  return log_integral;
}

double mu_d1(const Fn& f, double tol) {
  return real_line([&](double u) { return f(std::exp(u)); }, tol);
}

double mu_d1_log(const Fn& log_f, double tol) {
  return real_line_log([&](double u) { return log_f(std::exp(u)); }, tol);
}

}  // namespace mw::quad
