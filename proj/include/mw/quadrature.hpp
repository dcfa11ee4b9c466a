#pragma once

#include <functional>

namespace mw::quad {

using Fn = std::function<double(double)>;

// Double-exponential (tanh-sinh) quadrature on a finite interval (a,b).
// Handles integrable endpoint singularities. Levels are doubled until two
// successive estimates differ by less than tol in relative terms.
double tanh_sinh(const Fn& f, double a, double b, double tol = 1e-10, int max_level = 11);

// Double-exponential quadrature over the whole real line (sinh-sinh map).
// The integrand must be negligible for |u| beyond ~5e2.
double real_line(const Fn& f, double tol = 1e-10, int max_level = 11);

// Same, but the integrand is supplied in log form and log(integral) is
// returned; safe against underflow of sharply peaked integrands.
double real_line_log(const Fn& log_f, double tol = 1e-10, int max_level = 11);

// Integral against the d=1 reference measure: int_0^inf f(x) dx/x,
// computed over u = log x.
double mu_d1(const Fn& f, double tol = 1e-10);

// log of int_0^inf exp(log_f(x)) dx/x.
double mu_d1_log(const Fn& log_f, double tol = 1e-10);

}  // namespace mw::quad
