#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "fraclab/error.hpp"
#include "fraclab/quadrature.hpp"

using namespace fraclab;

TEST_CASE("gauss-legendre rules integrate polynomials exactly") {
  for (int n : {1, 2, 5, 10, 16, 33, 64}) {
    const auto& g = quad::gauss_legendre(n);
    double wsum = 0.0;
    for (double w : g.weights) wsum += w;
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
    int deg = 2 * n - 1;
    double exact = (deg % 2 == 0) ? 2.0 / (deg + 1) : 0.0;
    double got = quad::gauss_fixed([deg](double x) { return std::pow(x, deg); }, -1.0, 1.0, n);
    CHECK(got == doctest::Approx(exact).epsilon(1e-13).scale(1.0));
    double even = quad::gauss_fixed([deg](double x) { return std::pow(x, deg - 1); }, -1.0, 1.0, n);
    CHECK(even == doctest::Approx(2.0 / deg).epsilon(1e-13));
  }
  CHECK_THROWS_AS(quad::gauss_legendre(0), Error);
  CHECK_THROWS_AS(quad::gauss_legendre(65), Error);
}

TEST_CASE("adaptive integration of smooth and kinked integrands") {
  CHECK(quad::integrate([](double x) { return std::exp(x); }, 0.0, 1.0) ==
        doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-12));
  CHECK(quad::integrate([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0) ==
        doctest::Approx(0.5 * (0.09 + 0.49)).epsilon(1e-9));
  CHECK(quad::integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-8));
  auto r = quad::adaptive([](double x) { return 1.0 / x; }, 0.0, 1.0, {1e-8, 0.0, 50, 10});
  CHECK_FALSE(r.converged);
  CHECK_THROWS_AS(quad::integrate([](double x) { return 1.0 / x; }, 0.0, 1.0, {1e-8, 0.0, 50, 10}), Error);
}

TEST_CASE("algebraic endpoint substitution") {
  // int_0^h t^{-a} cos t dt against a series
  for (double a : {0.25, 0.5, 0.9}) {
    double h = 2.0;
    double series = 0.0, term_sign = 1.0, fact = 1.0;
    for (int k = 0; k < 30; ++k) {
      if (k > 0) fact *= (2.0 * k - 1.0) * (2.0 * k);
      series += term_sign * std::pow(h, 2.0 * k + 1.0 - a) / ((2.0 * k + 1.0 - a) * fact);
      term_sign = -term_sign;
    }
    double got = quad::integrate_algebraic([](double t) { return std::cos(t); }, h, a, {1e-12});
    CHECK(got == doctest::Approx(series).epsilon(1e-10));
  }
  CHECK_THROWS_AS(quad::integrate_algebraic([](double) { return 1.0; }, 1.0, 1.0), Error);
}

TEST_CASE("wynn epsilon accelerates an alternating series") {
  // ln 2 = 1 - 1/2 + 1/3 - ...
  std::vector<double> partial;
  double s = 0.0;
  for (int k = 1; k <= 15; ++k) {
    s += ((k % 2) ? 1.0 : -1.0) / k;
    partial.push_back(s);
  }
  auto e = quad::wynn_epsilon(partial);
  CHECK(std::abs(partial.back() - std::log(2.0)) > 1e-2);
  CHECK(e.value == doctest::Approx(std::log(2.0)).epsilon(1e-10));
}

TEST_CASE("pow_diff is stable near coincident arguments") {
  CHECK(quad::pow_diff(1.0 + 1e-12, 1.0, 0.5) == doctest::Approx(1e-12).epsilon(1e-6));
  CHECK(quad::pow_diff(4.0, 1.0, 0.5) == doctest::Approx(2.0));
  CHECK(quad::pow_diff(std::exp(1.0), 1.0, 0.0) == doctest::Approx(1.0));
  CHECK(quad::pow_diff(3.0, 0.0, 0.5) == doctest::Approx(2.0 * std::sqrt(3.0)));
  CHECK_THROWS_AS(quad::pow_diff(3.0, 0.0, -0.5), Error);
  // continuity in q across zero
  CHECK(quad::pow_diff(5.0, 2.0, 1e-9) == doctest::Approx(std::log(2.5)).epsilon(1e-8));
}
