#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "thinwire/errors.hpp"
#include "thinwire/single_scatter.hpp"
#include "thinwire/special_functions.hpp"

using namespace thinwire;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Complex kI{0.0, 1.0};

// Trigonometric interpolant of equispaced samples, same mode ordering as the solver.
Complex trig_interpolant(const std::vector<Complex>& values, double theta) {
  const int n = int(values.size());
  Complex out = 0.0;
  for (int m = 0; m < n; ++m) {
    Complex c = 0.0;
    for (int j = 0; j < n; ++j) c += values[j] * std::exp(-kI * (2.0 * kPi * m * j / n));
    const int mode = m <= n / 2 ? m : m - n;
    out += c / double(n) * std::exp(kI * (double(mode) * theta));
  }
  return out;
}

// (1/2pi) int_0^{2pi} ln(1/|s - t(phi)|) f(phi) a dphi by tanh-sinh, split at psi.
double log_potential(double a, double psi, const std::function<double(double)>& f) {
  boost::math::quadrature::tanh_sinh<double> q;
  const auto integrand = [&](double phi) {
    return -std::log(2.0 * a * std::abs(std::sin(0.5 * (psi - phi)))) * f(phi);
  };
  return a / (2 * kPi) * (q.integrate(integrand, 0.0, psi) + q.integrate(integrand, psi, 2 * kPi));
}

}  // namespace

TEST_CASE("log-sine constant") {
  CHECK(log_sine_constant() == doctest::Approx(-2.177586090303602).epsilon(1e-15));
  CHECK(std::abs(log_sine_quadrature() - log_sine_constant()) <= 1e-8);
  for (double psi : {0.0, 2.0}) {
    CHECK(std::abs(log_sine_period_quadrature(psi) + 2 * kPi * std::numbers::ln2) <= 1e-8);
  }
}

TEST_CASE("ring log integral equals a ln a") {
  CHECK(ring_log_integral(1.0, 0.3) == 0.0);
  CHECK(ring_log_integral(1e-2, 0.0) == doctest::Approx(-0.0460517018598809).epsilon(1e-13));
  CHECK(ring_log_integral(0.3, 0.0) == ring_log_integral(0.3, 1.3));
  for (double a : {1e-1, 1e-2, 1e-3}) {
    for (double psi : {0.0, 1.3, 5.0}) {
      CHECK(std::abs(ring_log_integral_quadrature(a, psi) - a * std::log(a)) <= 1e-10);
    }
    CHECK(std::abs(ring_log_integral(a, 0.0) / (a * std::log(a)) - 1.0) == 0.0);
  }
}

TEST_CASE("charge asymptotics") {
  const IncidentWave wave(1.0);
  const Complex q = charge_asymptotic(Disc({0, 0}, 1e-3), wave);
  CHECK(q.real() == doctest::Approx(-2 * kPi / std::log(1000.0)).epsilon(1e-15));
  CHECK(q.real() == doctest::Approx(-0.9095842).epsilon(1e-7));
  CHECK(q.imag() == 0.0);

  const IncidentWave w2(2.5);
  const double y0 = 0.7;
  const Complex shifted = charge_asymptotic(Disc({0, y0}, 1e-3), w2);
  const Complex origin = charge_asymptotic(Disc({0, 0}, 1e-3), w2);
  CHECK(std::abs(shifted - std::exp(kI * (2.5 * y0)) * origin) <= 1e-15);

  double previous = 1e300;
  for (double a : {1e-2, 1e-4, 1e-8}) {
    const double magnitude = std::abs(charge_asymptotic(Disc({0, 0}, a), wave));
    CHECK(magnitude < previous);
    previous = magnitude;
  }
  CHECK_THROWS_AS(charge_asymptotic(Disc({0, 0}, 1.0), wave), DomainError);
  CHECK_THROWS_AS(Disc({0, 0}, 0.0), DomainError);
  CHECK_THROWS_AS(IncidentWave(1.0, {1.0, 1.0}), DomainError);
}

TEST_CASE("nystrom charge solves the boundary equation (quadrature oracle)") {
  const IncidentWave wave(1.0, {0.6, 0.8});
  const Disc disc({0.3, -0.2}, 0.05);
  const BoundaryDensity sol = nystrom_charge(disc, wave, 32);
  REQUIRE(sol.values.size() == 32);

  // Q equals the (spectrally exact) trapezoid quadrature of sigma.
  Complex trapezoid = 0.0;
  for (const auto& v : sol.values) trapezoid += v;
  trapezoid *= 2 * kPi * disc.radius / 32.0;
  CHECK(std::abs(trapezoid - sol.charge) <= 1e-12 * std::abs(sol.charge));

  // Off-node residual of -u0(s) = alpha Q + (1/2pi) int ln(1/|s-t|) sigma dt.
  for (double psi : {0.1, 1.0, 2.5, 4.4}) {
    const auto re = [&](double phi) { return trig_interpolant(sol.values, phi).real(); };
    const auto im = [&](double phi) { return trig_interpolant(sol.values, phi).imag(); };
    const Complex potential{log_potential(disc.radius, psi, re),
                            log_potential(disc.radius, psi, im)};
    const Point2 s = disc.center + disc.radius * Point2{std::cos(psi), std::sin(psi)};
    const Complex lhs = -wave.value(s);
    const Complex rhs = alpha(wave.kappa()) * sol.charge + potential;
    CHECK(std::abs(lhs - rhs) <= 1e-9);
  }
}

TEST_CASE("nystrom charge for a nearly constant right-hand side") {
  // kappa a << 1 makes u0 = 1 + O(kappa a) on the circle.
  const double a = 1e-6;
  const IncidentWave wave(1.0);
  const BoundaryDensity sol = nystrom_charge(Disc({0, 0}, a), wave, 16);
  const Complex expected = -2 * kPi / (2 * kPi * alpha(1.0) + std::log(1 / a));
  CHECK(std::abs(sol.charge - expected) <= 1e-5 * std::abs(expected));
  // The first harmonic of u0 is i kappa a; the log kernel maps mode n to a/(2n),
  // so the density varies by about 2 kappa around its mean.
  Complex mean = 0.0;
  for (const auto& v : sol.values) mean += v / double(sol.values.size());
  CHECK(std::abs(mean - expected / (2 * kPi * a)) <= 1e-5 * std::abs(mean));
  for (const auto& v : sol.values) CHECK(std::abs(v - mean) <= 2.0 * wave.kappa() * (1 + 1e-3));
  CHECK_THROWS_AS(nystrom_charge(Disc({0, 0}, a), wave, 8), std::invalid_argument);
}

TEST_CASE("nystrom charge vs asymptotics at a = 1e-3") {
  const IncidentWave wave(1.0);
  const double a = 1e-3;
  const Disc disc({0, 0}, a);
  const Complex q = nystrom_charge(disc, wave, 64).charge;
  const double rel = std::abs(q - charge_asymptotic(disc, wave)) / std::abs(q);
  CHECK(rel <= 2.0 / std::log(1 / a));
}

TEST_CASE("charge convergence law over the a-ladder") {
  const IncidentWave wave(1.0);
  double previous = 1e300;
  for (double a : {1e-2, 1e-3, 1e-4, 1e-6}) {
    const Disc disc({0, 0}, a);
    const Complex q = nystrom_charge(disc, wave, 64).charge;
    const double e = std::abs(q - charge_asymptotic(disc, wave)) / std::abs(q);
    CHECK(e * std::log(1 / a) <= 5.0);
    CHECK(e < previous);
    previous = e;
  }
}

TEST_CASE("advisories for thick wires") {
  CHECK(thin_wire_advisories(Disc({0, 0}, 0.01), IncidentWave(1.0)).empty());
  CHECK(thin_wire_advisories(Disc({0, 0}, 0.2), IncidentWave(1.0)).size() == 1);
  CHECK(!nystrom_charge(Disc({0, 0}, 0.5), IncidentWave(1.0), 16).warnings.empty());
}

TEST_CASE("exact series: Dirichlet condition on the circle") {
  const IncidentWave wave(1.0);
  const Disc disc({0, 0}, 0.1);
  for (int i = 0; i < 24; ++i) {
    const double t = 2 * kPi * i / 24;
    CHECK(std::abs(exact_series(disc, wave, 40, disc.radius * Point2{std::cos(t), std::sin(t)})) <=
          1e-12);
  }
  for (double a : {1e-1, 1e-2, 1e-4}) {
    const Disc d({-0.4, 0.9}, a);
    const IncidentWave oblique(2.0, {std::cos(0.3), std::sin(0.3)});
    const int n = series_terms_for(2.0 * a);
    for (int i = 0; i < 16; ++i) {
      const double t = 2 * kPi * i / 16 + 0.1;
      CHECK(std::abs(exact_series(d, oblique, n,
                                  d.center + a * Point2{std::cos(t), std::sin(t)})) <= 1e-12);
    }
  }
  CHECK_THROWS_AS(exact_series(disc, wave, 10, {0.05, 0.0}), DomainError);
  CHECK_THROWS_AS(exact_series(disc, wave, 60, {1.0, 0.0}), std::out_of_range);
}

TEST_CASE("exact series gradient matches finite differences") {
  const IncidentWave wave(1.3, {0.8, -0.6});
  const Disc disc({0.1, 0.2}, 0.2);
  const int n = series_terms_for(1.3 * 0.2);
  const double h = 1e-6;
  for (const Point2 x : {Point2{0.6, 0.2}, Point2{-0.5, -0.7}, Point2{3.0, 4.0}}) {
    const ScalarSample s = exact_series_sample(disc, wave, n, x);
    const Complex fx = (exact_series(disc, wave, n, x + Point2{h, 0}) -
                        exact_series(disc, wave, n, x - Point2{h, 0})) /
                       (2 * h);
    const Complex fy = (exact_series(disc, wave, n, x + Point2{0, h}) -
                        exact_series(disc, wave, n, x - Point2{0, h})) /
                       (2 * h);
    CHECK(std::abs(s.dx - fx) <= 1e-8);
    CHECK(std::abs(s.dy - fy) <= 1e-8);
  }
}

TEST_CASE("exact series radiation condition") {
  const IncidentWave wave(1.0);
  const Disc disc({0, 0}, 0.1);
  const int n = series_terms_for(0.1);
  const Point2 dir{0.6, 0.8};
  double previous = 1e300;
  for (double r : {50.0, 100.0, 200.0}) {
    const Point2 x = r * dir;
    const ScalarSample total = exact_series_sample(disc, wave, n, x);
    const ScalarSample inc = wave.sample(x);
    const Complex u_sc = total.value - inc.value;
    const Complex dr = (total.dx - inc.dx) * dir.x + (total.dy - inc.dy) * dir.y;
    const double defect = std::sqrt(r) * std::abs(dr - kI * wave.kappa() * u_sc);
    // The defect decays like 1/r.
    if (previous < 1e300) CHECK(defect / previous == doctest::Approx(0.5).epsilon(0.05));
    previous = defect;
  }
  CHECK(previous <= 2e-3);
}

TEST_CASE("asymptotic field") {
  const IncidentWave wave(1.0);
  const Disc disc({0, 0}, 1e-4);
  // Scattered part decays like r^{-1/2}.
  const auto scattered = [&](double r) {
    const Point2 x{0.0, r};
    return std::abs(field_asymptotic(disc, wave, x) - wave.value(x));
  };
  CHECK(scattered(50) / scattered(200) == doctest::Approx(2.0).epsilon(0.01));

  // a -> 0 at fixed x recovers u0.
  const Point2 x{0.4, 0.3};
  CHECK(std::abs(field_asymptotic(Disc({0, 0}, 1e-300), wave, x) - wave.value(x)) <= 0.01);

  // Agreement with the exact series within O(1/ln(1/a)).
  const int n = series_terms_for(1e-4);
  for (int i = 0; i < 8; ++i) {
    const double t = 2 * kPi * i / 8;
    const Point2 p{std::cos(t), std::sin(t)};
    const Complex exact = exact_series(disc, wave, n, p);
    CHECK(std::abs(field_asymptotic(disc, wave, p) - exact) / std::abs(exact) <=
          1.0 / std::log(1e4));
  }
  CHECK_THROWS_AS(field_asymptotic(disc, wave, {5e-5, 0}), DomainError);
}

TEST_CASE("asymptotic field gradient matches finite differences") {
  const IncidentWave wave(1.0, {0.0, -1.0});
  const Disc disc({0.2, 0.2}, 1e-3);
  const double h = 1e-6;
  const Point2 x{0.9, -0.4};
  const ScalarSample s = field_asymptotic_sample(disc, wave, x);
  const Complex fx = (field_asymptotic(disc, wave, x + Point2{h, 0}) -
                      field_asymptotic(disc, wave, x - Point2{h, 0})) /
                     (2 * h);
  const Complex fy = (field_asymptotic(disc, wave, x + Point2{0, h}) -
                      field_asymptotic(disc, wave, x - Point2{0, h})) /
                     (2 * h);
  CHECK(std::abs(s.dx - fx) <= 1e-8);
  CHECK(std::abs(s.dy - fy) <= 1e-8);
}

TEST_CASE("field deviation from the exact series decreases with a") {
  const IncidentWave wave(1.0);
  double previous = 1e300;
  for (double a : {1e-2, 1e-3, 1e-4, 1e-6}) {
    const Disc disc({0, 0}, a);
    const int n = series_terms_for(a);
    double worst = 0.0;
    for (int i = 0; i < 32; ++i) {
      const double t = 2 * kPi * (i + 0.5) / 32;
      const Point2 p{std::cos(t), std::sin(t)};
      const Complex exact = exact_series(disc, wave, n, p);
      worst = std::max(worst, std::abs(field_asymptotic(disc, wave, p) - exact) / std::abs(exact));
    }
    CHECK(worst < previous);
    previous = worst;
  }
}

TEST_CASE("series_terms_for") {
  for (double ka : {1e-6, 1e-3, 0.1, 1.0, 5.0}) {
    const int n = series_terms_for(ka);
    CHECK(std::abs(bessel_j(n, ka)) < 1e-14);
    CHECK(std::abs(bessel_j(n, ka) / std::abs(hankel1(n, ka))) < 1e-14);
  }
  CHECK_THROWS_AS(series_terms_for(60.0), std::out_of_range);
  CHECK_THROWS_AS(series_terms_for(0.0), DomainError);
}
