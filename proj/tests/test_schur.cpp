#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "mw/rng.hpp"
#include "mw/schur.hpp"

using namespace mw::schur;

namespace {

// Brute-force semistandard-tableau evaluation of a Schur polynomial: fill
// the diagram with entries in 1..n, rows weakly increasing, columns
// strictly increasing, summing the content monomials.
double schur_by_tableaux(const Partition& lam, const std::vector<double>& x) {
  const int rows = lam.length();
  const int n = static_cast<int>(x.size());
  std::vector<std::vector<int>> t(rows);
  for (int r = 0; r < rows; ++r) t[r].assign(lam.part(r), 0);
  double total = 0.0;
  std::function<void(int, int)> fill = [&](int r, int c) {
    if (r == rows) {
      double mono = 1.0;
      for (int i = 0; i < rows; ++i)
        for (int v : t[i]) mono *= x[v - 1];
      total += mono;
      return;
    }
    const auto [nr, nc] = (c + 1 < lam.part(r)) ? std::pair{r, c + 1} : std::pair{r + 1, 0};
    const int left = (c > 0) ? t[r][c - 1] : 1;
    const int above = (r > 0 && c < lam.part(r - 1)) ? t[r - 1][c] + 1 : 1;
    for (int v = std::max(left, above); v <= n; ++v) {
      t[r][c] = v;
      fill(nr, nc);
    }
  };
  if (rows == 0) return 1.0;
  fill(0, 0);
  return total;
}

}  // namespace

TEST_CASE("partition basics") {
  const Partition p({3, 1});
  CHECK(p.size() == 4);
  CHECK(p.length() == 2);
  CHECK(p.part(5) == 0);
  CHECK_THROWS(Partition({1, 2}));
  CHECK(Partition({2, 1, 0, 0}).length() == 2);
  CHECK(Partition({1}).interlaced_below(Partition({2, 1})));
  CHECK_FALSE(Partition({3}).interlaced_below(Partition({2, 1})));
}

TEST_CASE("schur polynomials against tableau enumeration") {
  const std::vector<double> x2{0.7, 1.3};
  CHECK(schur_poly(Partition({1}), x2) == doctest::Approx(0.7 + 1.3).epsilon(1e-14));
  CHECK(schur_poly(Partition({2, 1}), x2) ==
        doctest::Approx(0.7 * 1.3 * (0.7 + 1.3)).epsilon(1e-13));

  mw::RngStream rng(61);
  const std::vector<Partition> shapes{Partition({2, 1}), Partition({3, 1}), Partition({2, 2}),
                                      Partition({3, 2, 1}), Partition({4})};
  for (const auto& lam : shapes) {
    for (int n : {2, 3}) {
      std::vector<double> x(n);
      for (double& v : x) v = 0.2 + rng.uniform();
      CHECK(schur_poly(lam, x) == doctest::Approx(schur_by_tableaux(lam, x)).epsilon(1e-12));
    }
  }

  // single variable: x^{|lam|} for length <= 1, zero otherwise
  CHECK(schur_poly(Partition({4}), {1.7}) == doctest::Approx(std::pow(1.7, 4)).epsilon(1e-13));
  CHECK(schur_poly(Partition({2, 1}), {1.7}) == doctest::Approx(0.0));
}

TEST_CASE("symmetry and homogeneity") {
  mw::RngStream rng(62);
  const Partition lam({3, 1});
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> x{rng.uniform(), rng.uniform(), rng.uniform()};
    std::vector<double> perm{x[2], x[0], x[1]};
    CHECK(schur_poly(lam, x) == doctest::Approx(schur_poly(lam, perm)).epsilon(1e-12));

    const double c = 0.5 + rng.uniform();
    std::vector<double> cx{c * x[0], c * x[1], c * x[2]};
    CHECK(schur_poly(lam, cx) ==
          doctest::Approx(std::pow(c, lam.size()) * schur_poly(lam, x)).epsilon(1e-12));
  }
}

TEST_CASE("pieri rule") {
  // empty partition, one variable: both sides 1/(1-x)
  const auto base = pieri_check(Partition{}, {0.5}, 40);
  CHECK(base.rhs == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(std::abs(base.lhs - base.rhs) <= base.tail_bound);
  CHECK(base.tail_bound < 1e-4);

  const auto mid = pieri_check(Partition({1}), {0.3, 0.2}, 30);
  CHECK(std::abs(mid.lhs - mid.rhs) <= mid.tail_bound);
  CHECK(mid.tail_bound < 1e-8);

  // x = 0: both sides reduce to s_mu(0) = indicator(mu empty)
  const auto zero = pieri_check(Partition({2}), {0.0, 0.0}, 5);
  CHECK(zero.lhs == doctest::Approx(0.0));
  CHECK(zero.rhs == doctest::Approx(0.0));
  const auto zero_empty = pieri_check(Partition{}, {0.0}, 5);
  CHECK(zero_empty.lhs == doctest::Approx(1.0));
  CHECK(zero_empty.rhs == doctest::Approx(1.0));

  CHECK_THROWS(pieri_check(Partition({1}), {1.1}, 5));
}

TEST_CASE("cauchy-littlewood") {
  // n = N = 1: geometric series
  const auto geo = cauchy_littlewood_check({0.4}, {0.5}, 60);
  CHECK(geo.rhs == doctest::Approx(1.0 / (1.0 - 0.2)).epsilon(1e-13));
  CHECK(std::abs(geo.lhs - geo.rhs) <= geo.tail_bound + 64 * 1e-16);
  CHECK(geo.tail_bound < 1e-10);

  const auto two = cauchy_littlewood_check({0.3, 0.1}, {0.2}, 40);
  CHECK(std::abs(two.lhs - two.rhs) < 1e-10);
  CHECK(std::abs(two.lhs - two.rhs) <= two.tail_bound + 64 * 1e-16);

  // a fatter instance with two variables on both sides
  const auto fat = cauchy_littlewood_check({0.35, 0.2}, {0.3, 0.25}, 30);
  CHECK(std::abs(fat.lhs - fat.rhs) <= fat.tail_bound + 64 * 1e-16);
  CHECK(fat.tail_bound < 1e-6);

  CHECK_THROWS(cauchy_littlewood_check({2.0}, {0.6}, 10));
}
