#include <boost/math/special_functions/bessel.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "thinwire/errors.hpp"
#include "thinwire/special_functions.hpp"

using namespace thinwire;
using Big = boost::multiprecision::cpp_bin_float_50;

namespace {

constexpr double kPi = std::numbers::pi;

// J_n(x) = sum_k (-1)^k (x/2)^{2k+n} / (k! (k+n)!) in 50-digit arithmetic.
double j_oracle(int n, double x) {
  const Big half = Big(x) / 2;
  Big term = 1;
  for (int i = 1; i <= n; ++i) term *= half / i;
  Big sum = term;
  const Big q = -half * half;
  for (int k = 1; k < 400; ++k) {
    term *= q / (Big(k) * (k + n));
    sum += term;
    if (abs(term) < abs(sum) * Big("1e-45")) break;
  }
  return static_cast<double>(sum);
}

double y_oracle(int n, double x) {
  return static_cast<double>(boost::math::cyl_neumann(n, Big(x)));
}

// Scale used for relative error: the modulus envelope where J_n and Y_n
// oscillate, the function itself where they are monotone.
double scale(int n, double x, double j, double y) { return x > n ? std::hypot(j, y) : std::abs(j); }

}  // namespace

TEST_CASE("bessel values at x = 1") {
  CHECK(bessel_j(0, 0.0) == 1.0);
  CHECK(bessel_j(0, 1.0) == doctest::Approx(0.765197686557967).epsilon(1e-14));
  CHECK(bessel_y(0, 1.0) == doctest::Approx(0.088256964215677).epsilon(1e-13));
  const Complex h = hankel1(0, 1.0);
  CHECK(h.real() == doctest::Approx(0.765197686557967).epsilon(1e-14));
  CHECK(h.imag() == doctest::Approx(0.088256964215677).epsilon(1e-13));
}

TEST_CASE("J_n against a 50-digit power series") {
  double worst = 0.0;
  for (int n : {0, 1, 2, 5, 10, 20, 40, 60}) {
    for (double x : {1e-8, 1e-3, 0.1, 0.9, 3.0, 7.5, 12.0, 16.9, 17.1, 30.0, 75.0}) {
      const double ref = j_oracle(n, x);
      if (ref == 0.0) continue;
      const double y = y_oracle(n, x);
      const double err = std::abs(bessel_j(n, x) - ref) / scale(n, x, ref, y);
      worst = std::max(worst, err);
      INFO("n=" << n << " x=" << x << " err=" << err);
      CHECK(err <= 1e-12);
    }
  }
  MESSAGE("worst relative J error " << worst);
}

TEST_CASE("Y_n against multiprecision Neumann functions") {
  for (int n : {0, 1, 2, 5, 10, 20, 40}) {
    for (double x : {1e-3, 0.1, 1.0, 3.0, 12.0, 17.0, 25.0, 100.0, 1000.0}) {
      const double ref = y_oracle(n, x);
      if (!std::isfinite(ref)) continue;
      const double j = j_oracle(n, x);
      const double err =
          std::abs(bessel_y(n, x) - ref) / std::max(scale(n, x, j, ref), std::abs(ref));
      INFO("n=" << n << " x=" << x << " err=" << err);
      CHECK(err <= 1e-12);
    }
  }
}

TEST_CASE("J at large argument against the 50-digit reference") {
  for (double x : {100.0, 500.0, 1000.0}) {
    for (int n : {0, 1, 7}) {
      const double ref = static_cast<double>(boost::math::cyl_bessel_j(n, Big(x)));
      const double y = y_oracle(n, x);
      CHECK(std::abs(bessel_j(n, x) - ref) / std::hypot(ref, y) <= 1e-12);
    }
  }
}

TEST_CASE("series and asymptotic branches agree at the switch point") {
  const double below = std::nextafter(kSeriesLimit, 0.0);
  for (int n : {0, 1, 3}) {
    CHECK(bessel_j(n, below) == doctest::Approx(bessel_j(n, kSeriesLimit)).epsilon(1e-12));
    CHECK(bessel_y(n, below) == doctest::Approx(bessel_y(n, kSeriesLimit)).epsilon(1e-12));
  }
}

TEST_CASE("Wronskian J0 Y1 - J1 Y0 = -2/(pi x) on 50 log-spaced points") {
  for (int i = 0; i < 50; ++i) {
    const double x = std::pow(10.0, -2.0 + 5.0 * i / 49.0);
    const double w = bessel_j(0, x) * bessel_y(1, x) - bessel_j(1, x) * bessel_y(0, x);
    const double expected = -2.0 / (kPi * x);
    INFO("x=" << x);
    CHECK(std::abs(w - expected) <= 1e-10 * std::abs(expected));
  }
}

TEST_CASE("dH0/dx = -H1 by central differences") {
  const double h = 1e-5;
  for (double x : {0.3, 1.0, 5.0, 20.0}) {
    const Complex d = (hankel1(0, x + h) - hankel1(0, x - h)) / (2 * h);
    CHECK(std::abs(d + hankel1(1, x)) <= 1e-6);
  }
}

TEST_CASE("negative orders follow parity") {
  for (int n : {1, 2, 7}) {
    const double sign = n % 2 ? -1.0 : 1.0;
    CHECK(bessel_j(-n, 2.5) == doctest::Approx(sign * bessel_j(n, 2.5)));
    CHECK(bessel_y(-n, 2.5) == doctest::Approx(sign * bessel_y(n, 2.5)));
  }
}

TEST_CASE("bessel domain errors") {
  CHECK_THROWS_AS(bessel_y(0, 0.0), DomainError);
  CHECK_THROWS_AS(bessel_y(3, -1.0), DomainError);
  CHECK_THROWS_AS(bessel_j(0, -1e-3), DomainError);
  CHECK_THROWS_AS(bessel_j(61, 1.0), std::out_of_range);
  CHECK_THROWS_AS(hankel1(0, 0.0), DomainError);
  CHECK_THROWS_AS(bessel_y(60, 1e-8), std::overflow_error);
}

TEST_CASE("green2d value, symmetry and coincident points") {
  const GreenKernel kernel(1.0);
  const Complex g = green2d(kernel, {0.0, 0.0}, {0.6, 0.8});
  const Complex expected = Complex(0.0, 0.25) * Complex(0.765197686557967, 0.088256964215677);
  CHECK(std::abs(g - expected) <= 1e-14);

  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  const GreenKernel k2(2.3);
  for (int i = 0; i < 100; ++i) {
    const Point2 x{u(rng), u(rng)};
    const Point2 t{u(rng), u(rng)};
    CHECK(green2d(k2, x, t) == green2d(k2, t, x));
  }
  CHECK_THROWS_AS(green2d(kernel, {1.0, 1.0}, {1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(GreenKernel(0.0), DomainError);
}

TEST_CASE("green2d gradient matches finite differences") {
  const GreenKernel kernel(1.7);
  const Point2 t{0.2, -0.3};
  const double h = 1e-6;
  for (const Point2 x : {Point2{1.0, 0.5}, Point2{-0.1, 0.05}, Point2{4.0, -3.0}}) {
    const auto [gx, gy] = green2d_gradient(kernel, x, t);
    const Complex fx =
        (green2d(kernel, x + Point2{h, 0}, t) - green2d(kernel, x - Point2{h, 0}, t)) / (2 * h);
    const Complex fy =
        (green2d(kernel, x + Point2{0, h}, t) - green2d(kernel, x - Point2{0, h}, t)) / (2 * h);
    CHECK(std::abs(gx - fx) <= 1e-7 * std::abs(gx) + 1e-9);
    CHECK(std::abs(gy - fy) <= 1e-7 * std::abs(gy) + 1e-9);
  }
}

TEST_CASE("alpha closed form") {
  CHECK(std::abs(alpha(2.0) - Complex(0.0, 0.25)) == 0.0);
  CHECK(alpha(1.0).real() == doctest::Approx(0.110318).epsilon(1e-6));
  CHECK(alpha(1.0).real() == doctest::Approx(std::numbers::ln2 / (2 * kPi)).epsilon(1e-15));
  CHECK(alpha(2.0 * std::numbers::e).real() == doctest::Approx(-1.0 / (2 * kPi)).epsilon(1e-14));
  CHECK(alpha(2.0 * std::numbers::e).imag() == 0.25);
}

TEST_CASE("small-r law of the Green kernel") {
  // g - alpha - ln(1/r)/(2 pi) converges monotonically; its limit is
  // -gamma/(2 pi) because alpha carries no Euler-constant term.
  const GreenKernel kernel(1.0);
  const double limit = -std::numbers::egamma / (2 * kPi);
  double previous = 1e300;
  for (double r : {1e-2, 1e-4, 1e-6}) {
    const Complex residual =
        green2d(kernel, {0, 0}, {r, 0}) - alpha(1.0) - std::log(1 / r) / (2 * kPi);
    const double distance_to_limit = std::abs(residual - limit);
    CHECK(distance_to_limit < previous);
    previous = distance_to_limit;
  }
  CHECK(previous <= 1e-10);
  const Complex regular = green2d(kernel, {0, 0}, {1e-6, 0}) - std::log(1e6) / (2 * kPi);
  CHECK(std::abs(regular - green_regular_constant(1.0)) <= 1e-10);
}
