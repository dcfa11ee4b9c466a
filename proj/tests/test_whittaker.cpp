#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "mw/energy.hpp"
#include "mw/quadrature.hpp"
#include "mw/rng.hpp"
#include "mw/special_functions.hpp"
#include "mw/whittaker.hpp"
#include "mw/wishart.hpp"

using namespace mw;
using namespace mw::whittaker;

namespace {

MatrixVector scalars(std::initializer_list<double> xs) {
  MatrixVector v;
  for (double x : xs) v.push_back(SpdMatrix::scalar(1, x));
  return v;
}

std::vector<Cplx> cplx(std::initializer_list<double> xs) {
  return std::vector<Cplx>(xs.begin(), xs.end());
}

}  // namespace

TEST_CASE("log_delta") {
  TriangularArray x(3, 2);
  CHECK(log_delta(cplx({0, 0, 0}), x).real() == doctest::Approx(0.0));
  CHECK(log_delta(cplx({1.3, -0.4, 2.0}), x).real() == doctest::Approx(0.0));  // identity entries

  TriangularArray y(2, 1);
  y.at(1, 1) = SpdMatrix::scalar(1, 0.7);
  y.at(2, 1) = SpdMatrix::scalar(1, 2.0);
  y.at(2, 2) = SpdMatrix::scalar(1, 3.0);
  CHECK(log_delta(cplx({1, 1}), y).real() == doctest::Approx(-std::log(6.0)).epsilon(1e-12));
}

TEST_CASE("phi_energy") {
  TriangularArray one(1, 2);
  CHECK(phi_energy(one) == doctest::Approx(0.0));

  for (int d : {1, 2, 3}) {
    TriangularArray x(2, d);
    CHECK(phi_energy(x) == doctest::Approx(2.0 * d));
  }

  TriangularArray t(3, 1);
  CHECK(phi_energy(t) == doctest::Approx(6.0));  // six arrows in the N=3 pattern

  // shared implementation with the energy module on the triangular graph
  RngStream rng(3);
  TriangularArray r(3, 2);
  std::vector<SpdMatrix> flat;
  for (int i = 1; i <= 3; ++i) {
    for (int j = 1; j <= i; ++j) {
      Eigen::MatrixXd g(2, 2);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) g(a, b) = rng.normal();
      r.at(i, j) = SpdMatrix(g.transpose() * g + 0.3 * Eigen::MatrixXd::Identity(2, 2));
      flat.push_back(r.at(i, j));
    }
  }
  CHECK(phi_energy(r) ==
        doctest::Approx(energy::energy_Phi(flat, energy::triangular_graph(3))).epsilon(1e-12));
}

TEST_CASE("trapezoid delta and phi") {
  // degenerate trapezoid n = N reduces to the triangular forms
  RngStream rng(5);
  TrapezoidArray t(3, 3, 1);
  TriangularArray tri(3, 1);
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= i; ++j) {
      const double v = std::exp(rng.normal());
      t.at(i, j) = SpdMatrix::scalar(1, v);
      tri.at(i, j) = SpdMatrix::scalar(1, v);
    }
  const auto lam = cplx({0.3, 1.1, -0.7});
  CHECK(log_delta_trap(lam, t).real() == doctest::Approx(log_delta(lam, tri).real()).epsilon(1e-12));
  CHECK(phi_energy_trap(PsdMatrix::zero(1), t) == doctest::Approx(phi_energy(tri)).epsilon(1e-12));

  // one extra arrow from s
  for (int d : {1, 2}) {
    TrapezoidArray u(2, 2, d);
    TriangularArray utri(2, d);
    CHECK(phi_energy_trap(PsdMatrix(SpdMatrix::identity(d)), u) ==
          doctest::Approx(phi_energy(utri) + d).epsilon(1e-12));
  }

  CHECK(log_delta_trap(cplx({0, 0, 0, 0}), TrapezoidArray(2, 4, 1)).real() == doctest::Approx(0.0));
}

TEST_CASE("whittaker_quadrature base cases") {
  // N = 1: |z|^{-lambda}
  CHECK(whittaker_quadrature(cplx({2.0}), scalars({3.0})).real() ==
        doctest::Approx(-2.0 * std::log(3.0)).epsilon(1e-12));

  // N = 2 at lambda = 0, z = (1,1): 2 K_0(2), Bessel oracle
  const double bessel = 2.0 * std::cyl_bessel_k(0.0, 2.0);
  CHECK(whittaker_quadrature(cplx({0, 0}), scalars({1, 1})).real() ==
        doctest::Approx(std::log(bessel)).epsilon(1e-10));

  // parameter symmetry for d = 1
  const double a = whittaker_quadrature(cplx({1, 2}), scalars({1, 1})).real();
  const double b = whittaker_quadrature(cplx({2, 1}), scalars({1, 1})).real();
  CHECK(a == doctest::Approx(b).epsilon(1e-8));

  CHECK_THROWS(whittaker_quadrature(cplx({0, 0, 0, 0}), scalars({1, 1, 1, 1})));
  MatrixVector z2(2, SpdMatrix::identity(2));
  CHECK_THROWS(whittaker_quadrature(cplx({0, 0}), z2));
}

TEST_CASE("whittaker_quadrature N=3 consistency with direct 3d integral") {
  // brute-force trapezoid on a log grid as an independent oracle
  const std::vector<Cplx> lam = cplx({0.5, 1.0, 1.5});
  const MatrixVector z = scalars({1.0, 1.5, 0.8});
  const double fine = whittaker_quadrature(lam, z, 1e-8).real();

  const double z1 = 1.0, z2 = 1.5, z3 = 0.8;
  const double h = 0.08;
  double sum = 0.0;
  for (double ua = -9; ua <= 9; ua += h)
    for (double ub1 = -9; ub1 <= 9; ub1 += h)
      for (double ub2 = -9; ub2 <= 9; ub2 += h) {
        const double A = std::exp(ua), b1 = std::exp(ub1), b2 = std::exp(ub2);
        const double ld = -0.5 * ua - 1.0 * (ub1 + ub2 - ua) -
                          1.5 * (std::log(z1 * z2 * z3) - ub1 - ub2);
        const double phi = b2 / A + A / b1 + z2 / b1 + b1 / z1 + z3 / b2 + b2 / z2;
        sum += std::exp(ld - phi);
      }
  const double brute = std::log(sum * h * h * h);
  CHECK(fine == doctest::Approx(brute).epsilon(5e-4));
}

TEST_CASE("whittaker_mc agrees with quadrature") {
  RngStream rng(42, 1);
  const auto est = whittaker_mc(cplx({1, 1}), scalars({1, 2}), 60000, rng);
  const double exact = whittaker_quadrature(cplx({1, 1}), scalars({1, 2})).real();
  CHECK(std::abs(std::exp(est.log_value.real() - exact) - 1.0) < 3.0 * est.rel_se);
  CHECK(est.ess > 600.0);

  const auto unit = whittaker_mc(cplx({1.7}), scalars({2.5}), 10, rng);
  CHECK(unit.log_value.real() == doctest::Approx(-1.7 * std::log(2.5)).epsilon(1e-14));
  CHECK(unit.rel_se == 0.0);
}

TEST_CASE("whittaker_mc matches quadrature at d=1 N=3") {
  RngStream rng(42, 2);
  const auto lam = cplx({0.5, 1.0, 1.5});
  const MatrixVector z = scalars({1.0, 1.5, 0.8});
  const auto est = whittaker_mc(lam, z, 120000, rng);
  const double exact = whittaker_quadrature(lam, z, 1e-8).real();
  CHECK(std::abs(std::exp(est.log_value.real() - exact) - 1.0) < 3.5 * est.rel_se);
}

TEST_CASE("whittaker_trap") {
  RngStream rng(42, 3);

  // n = N, s = 0 reduces to psi
  const auto t0 = whittaker_trap(cplx({1, 1}), PsdMatrix::zero(1), scalars({1, 2}), 1000, rng);
  CHECK(t0.log_value.real() ==
        doctest::Approx(whittaker_quadrature(cplx({1, 1}), scalars({1, 2})).real()).epsilon(1e-9));

  // d=1, N=1, n=1, s=1, lambda=2, z=3: e^{-1/3} 3^{-2}
  const auto t1 = whittaker_trap(cplx({2.0}), PsdMatrix(SpdMatrix::scalar(1, 1.0)), scalars({3.0}),
                                 1000, rng);
  CHECK(t1.log_value.real() == doctest::Approx(-1.0 / 3.0 - 2.0 * std::log(3.0)).epsilon(1e-12));
  CHECK(whittaker_trap_quadrature_d1({2.0}, 1.0, 3.0) ==
        doctest::Approx(-1.0 / 3.0 - 2.0 * std::log(3.0)).epsilon(1e-12));

  // triangle&trapezoid identity: psi^2_lambda(z) = |z_2|^{-l2} psi^{1,2}_{lambda; z_2}(z_1)
  const double l1 = 0.8, l2 = 1.4, z1 = 1.3, z2 = 0.6;
  const double lhs = whittaker_quadrature(cplx({l1, l2}), scalars({z1, z2})).real();
  const double rhs = -l2 * std::log(z2) + whittaker_trap_quadrature_d1({l1, l2}, z2, z1);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-5));

  // MC route for n > N agrees with the 1-d quadrature route
  const auto tm = whittaker_trap(cplx({0.9, 1.1}), PsdMatrix(SpdMatrix::scalar(1, 0.7)),
                                 scalars({1.2}), 60000, rng);
  const double tq = whittaker_trap_quadrature_d1({0.9, 1.1}, 0.7, 1.2);
  CHECK(std::abs(std::exp(tm.log_value.real() - tq) - 1.0) < 3.0 * tm.rel_se);
}

TEST_CASE("whittaker measure at N=n=1 is inverse gamma") {
  const double lam = 1.2, rho = 0.9;
  // pointwise density equality
  for (double z : {0.4, 1.0, 2.7}) {
    const double got = whittaker_measure_log_density({lam}, {rho}, scalars({z}));
    const double expect = -log_multigamma(1, lam + rho) - 1.0 / z - (lam + rho) * std::log(z);
    CHECK(got == doctest::Approx(expect).epsilon(1e-10));
  }

  // normalisation by quadrature
  const double mass = quad::mu_d1(
      [&](double z) {
        return std::exp(whittaker_measure_log_density({lam}, {rho}, scalars({z})));
      },
      1e-10);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));

  // empirical mean of 1/Z for Z ~ inverse gamma(lam+rho)
  RngStream rng(42, 4);
  double acc = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) acc += rng.gamma(lam + rho);
  CHECK(acc / n == doctest::Approx(lam + rho).epsilon(0.02));
}

TEST_CASE("parameter symmetry evidence at d=2, N=2") {
  // Known for d=1; for d=2 the N=n=2 case is expected to hold. Recorded as
  // Monte-Carlo evidence, not asserted as a tight invariant.
  RngStream rng(42, 5);
  Eigen::MatrixXd m1(2, 2), m2(2, 2);
  m1 << 1.2, 0.3, 0.3, 0.9;
  m2 << 0.8, -0.1, -0.1, 1.1;
  const MatrixVector z{SpdMatrix(m1), SpdMatrix(m2)};
  const auto a = whittaker_mc(cplx({0.7, 1.6}), z, 120000, rng);
  const auto b = whittaker_mc(cplx({1.6, 0.7}), z, 120000, rng);
  const double se = std::sqrt(a.rel_se * a.rel_se + b.rel_se * b.rel_se);
  CHECK(std::abs(std::exp(a.log_value.real() - b.log_value.real()) - 1.0) < 4.0 * se);
}

TEST_CASE("whittaker measure symmetry in lambda and rho at n=N") {
  const MatrixVector z = scalars({0.8, 1.7});
  const double a = whittaker_measure_log_density({1.0, 2.0}, {0.5, 1.5}, z);
  const double b = whittaker_measure_log_density({0.5, 1.5}, {1.0, 2.0}, z);
  CHECK(a == doctest::Approx(b).epsilon(1e-9));
}

TEST_CASE("asymptotics of psi at r^N(k)") {
  const energy::Dag g = energy::triangular_graph(2);
  const auto m = energy::minimize_Phi(g, energy::BoundaryAssignment::scalars({1, 1}, 1));

  auto ratio = [&](double k, std::vector<Cplx> lam) {
    const MatrixVector z = scalars({1.0 / k, k});
    const double lhs = whittaker_quadrature(lam, z, 1e-11).real();
    return std::exp(lhs - whittaker_asymptotic_rhs(2, 1, k, m));
  };

  CHECK(std::abs(ratio(50.0, cplx({0, 0})) - 1.0) < 0.02);

  double prev_gap = std::abs(ratio(5.0, cplx({0, 0})) - 1.0);
  for (double k : {10.0, 20.0, 50.0}) {
    const double gap = std::abs(ratio(k, cplx({0, 0})) - 1.0);
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }

  // At r^2(k) the function collapses to a Bessel K of the parameter gap:
  // psi = 2 K_{l2-l1}(2k). Pin the quadrature against that oracle.
  for (double k : {5.0, 30.0}) {
    for (auto [l1, l2] : {std::pair{0.0, 0.0}, {1.0, 2.0}, {3.0, 1.0}}) {
      const double got = whittaker_quadrature(cplx({l1, l2}), scalars({1.0 / k, k}), 1e-11).real();
      const double oracle = std::log(2.0 * std::cyl_bessel_k(std::abs(l2 - l1), 2.0 * k));
      CHECK(got == doctest::Approx(oracle).epsilon(1e-9));
    }
  }

  // Leading order does not depend on lambda. The subleading correction is
  // (l2-l1)^2/(4k) by the Bessel expansion, so 2% needs k beyond ~50 for
  // the (3,1) pair; check the true decay at k = 30 and the 2% level at 100.
  auto spread = [&](double k) {
    const double r1 = ratio(k, cplx({0, 0}));
    const double r2 = ratio(k, cplx({1, 2}));
    const double r3 = ratio(k, cplx({3, 1}));
    return std::max(std::abs(r2 / r1 - 1.0), std::abs(r3 / r1 - 1.0));
  };
  const double s30 = spread(30.0);
  CHECK(s30 == doctest::Approx(1.0 / 30.0).epsilon(0.15));  // dominated by the (3,1) pair
  CHECK(spread(100.0) < 0.02);
}
