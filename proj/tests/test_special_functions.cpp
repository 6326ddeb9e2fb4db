#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "stabaudit/special_functions.hpp"

using namespace stabaudit;

TEST_CASE("student t tail matches closed forms at dof 1 and 2") {
  // dof=1 is Cauchy, dof=2 has an elementary CDF
  for (double t : {0.1, 0.5, 1.0, 1.5, 3.0, 10.0}) {
    CHECK(student_t_two_sided_p(t, 1.0) ==
          doctest::Approx(1.0 - 2.0 * std::atan(t) / M_PI).epsilon(1e-12));
    CHECK(student_t_two_sided_p(t, 2.0) ==
          doctest::Approx(1.0 - t / std::sqrt(t * t + 2.0)).epsilon(1e-12));
  }
}

TEST_CASE("chi-squared tail matches closed forms at even dof") {
  for (double x : {0.5, 1.0, 2.0, 5.0, 12.0}) {
    CHECK(chi_squared_upper_p(x, 2.0) == doctest::Approx(std::exp(-x / 2.0)).epsilon(1e-12));
    CHECK(chi_squared_upper_p(x, 4.0) ==
          doctest::Approx((1.0 + x / 2.0) * std::exp(-x / 2.0)).epsilon(1e-12));
  }
  // dof=1 via the normal tail
  for (double x : {0.3, 1.0, 4.0}) {
    CHECK(chi_squared_upper_p(x, 1.0) ==
          doctest::Approx(2.0 * normal_sf(std::sqrt(x))).epsilon(1e-12));
  }
}

TEST_CASE("F tail matches the closed form at d1 = 2") {
  for (double f : {0.2, 1.0, 2.5, 8.0}) {
    for (double d2 : {3.0, 7.0, 20.0}) {
      CHECK(f_upper_p(f, 2.0, d2) ==
            doctest::Approx(std::pow(1.0 + 2.0 * f / d2, -d2 / 2.0)).epsilon(1e-12));
    }
  }
}

TEST_CASE("distribution tails agree with density quadrature") {
  std::mt19937_64 rng(314159);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    const double t = unit(rng) * 5.0 + 0.05;
    const double dof = 1.0 + std::floor(unit(rng) * 60.0);
    CHECK(student_t_two_sided_p(t, dof) ==
          doctest::Approx(oracle::student_t_two_sided_quadrature(t, dof)).epsilon(1e-9));

    const double x = unit(rng) * 20.0 + 0.1;
    const double k = 2.0 + std::floor(unit(rng) * 30.0);
    CHECK(chi_squared_upper_p(x, k) ==
          doctest::Approx(oracle::chi_squared_upper_quadrature(x, k)).epsilon(1e-9));

    const double f = unit(rng) * 6.0 + 0.05;
    const double d1 = 2.0 + std::floor(unit(rng) * 10.0);
    const double d2 = 2.0 + std::floor(unit(rng) * 40.0);
    CHECK(f_upper_p(f, d1, d2) ==
          doctest::Approx(oracle::f_upper_quadrature(f, d1, d2)).epsilon(1e-9));
  }
}

TEST_CASE("incomplete beta endpoints and symmetry") {
  CHECK(regularized_incomplete_beta(2.0, 3.0, 0.0) == 0.0);
  CHECK(regularized_incomplete_beta(2.0, 3.0, 1.0) == 1.0);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.01, 0.99);
  for (int trial = 0; trial < 100; ++trial) {
    const double a = unit(rng) * 10.0 + 0.1, b = unit(rng) * 10.0 + 0.1, x = unit(rng);
    const double direct = regularized_incomplete_beta(a, b, x);
    const double mirrored = 1.0 - regularized_incomplete_beta(b, a, 1.0 - x);
    CHECK(direct == doctest::Approx(mirrored).epsilon(1e-10));
  }
}

TEST_CASE("normal tails") {
  CHECK(normal_sf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(normal_two_sided_p(0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(normal_two_sided_p(1.959963984540054) == doctest::Approx(0.05).epsilon(1e-9));
  CHECK(normal_two_sided_p(-1.959963984540054) == doctest::Approx(0.05).epsilon(1e-9));
}
