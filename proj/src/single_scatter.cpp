#include "thinwire/single_scatter.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "thinwire/errors.hpp"
#include "thinwire/quadrature.hpp"
#include "thinwire/special_functions.hpp"

namespace thinwire {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr Complex kI{0.0, 1.0};

double log_inverse_radius(double a) {
  if (!(a > 0) || !(a < 1)) {
    throw DomainError("thin-wire asymptotics need 0 < a < 1 (got a = " + std::to_string(a) + ")");
  }
  return std::log(1.0 / a);
}

// Coordinates of v in the frame whose +y axis is the incidence direction.
Point2 to_local(Point2 v, Point2 dir) { return {v.x * dir.y - v.y * dir.x, v.dot(dir)}; }

// Local axes: ex' = (dir.y, -dir.x), ey' = dir.
std::pair<Complex, Complex> from_local(Complex gx, Complex gy, Point2 dir) {
  return {gx * dir.y + gy * dir.x, -gx * dir.x + gy * dir.y};
}

}  // namespace

Disc::Disc(Point2 c, double a) : center(c), radius(a) {
  if (!(a > 0) || !std::isfinite(a)) throw DomainError("Disc: radius must be positive");
}

IncidentWave::IncidentWave(double kappa, Point2 direction) : kappa_(kappa), direction_(direction) {
  if (!(kappa > 0) || !std::isfinite(kappa)) {
    throw DomainError("IncidentWave: kappa must be finite and positive");
  }
  if (std::abs(direction.norm() - 1.0) > 1e-12) {
    throw DomainError("IncidentWave: direction must be a unit vector");
  }
}

Complex IncidentWave::value(Point2 x) const { return std::exp(kI * (kappa_ * direction_.dot(x))); }

ScalarSample IncidentWave::sample(Point2 x) const {
  const Complex u = value(x);
  const Complex factor = kI * kappa_ * u;
  return {u, factor * direction_.x, factor * direction_.y};
}

std::vector<std::string> thin_wire_advisories(const Disc& disc, const IncidentWave& wave) {
  std::vector<std::string> notes;
  const double ka = wave.kappa() * disc.radius;
  if (ka > 0.1) {
    std::ostringstream os;
    os << "kappa*a = " << ka << " exceeds 0.1; thin-wire asymptotics may be inaccurate";
    notes.push_back(os.str());
  }
  return notes;
}

Complex charge_asymptotic(const Disc& disc, const IncidentWave& wave) {
  const double log_inv = log_inverse_radius(disc.radius);
  return -2.0 * kPi * wave.value(disc.center) / log_inv;
}

Complex field_asymptotic(const Disc& disc, const IncidentWave& wave, Point2 x) {
  return field_asymptotic_sample(disc, wave, x).value;
}

ScalarSample field_asymptotic_sample(const Disc& disc, const IncidentWave& wave, Point2 x) {
  const double log_inv = log_inverse_radius(disc.radius);
  if (!(distance(x, disc.center) > disc.radius)) {
    throw DomainError("field_asymptotic: evaluation point lies on or inside the cylinder");
  }
  const GreenKernel kernel(wave.kappa());
  const Complex weight = -(2.0 * kPi / log_inv) * wave.value(disc.center);
  const Complex g = green2d(kernel, x, disc.center);
  const auto [gx, gy] = green2d_gradient(kernel, x, disc.center);
  ScalarSample s = wave.sample(x);
  s.value += weight * g;
  s.dx += weight * gx;
  s.dy += weight * gy;
  return s;
}

BoundaryDensity nystrom_charge(const Disc& disc, const IncidentWave& wave, int n_modes) {
  if (n_modes < 16) throw std::invalid_argument("nystrom_charge: n_modes must be >= 16");
  const double a = disc.radius;
  const double log_inv = log_inverse_radius(a);
  const int n = n_modes;

  BoundaryDensity out;
  out.nodes.resize(n);
  std::vector<Complex> rhs(n);
  for (int j = 0; j < n; ++j) {
    const double theta = 2.0 * kPi * j / n;
    out.nodes[j] = theta;
    const Point2 s = disc.center + a * Point2{std::cos(theta), std::sin(theta)};
    rhs[j] = -wave.value(s);
  }

  // Fourier index of DFT bin m: 0..n/2 then negative.
  auto mode_of = [n](int m) { return m <= n / 2 ? m : m - n; };
  const Complex mode0 = a * (2.0 * kPi * alpha(wave.kappa()) + log_inv);

  std::vector<Complex> sigma_hat(n);
  double lam_max = std::abs(mode0);
  double lam_min = std::abs(mode0);
  for (int m = 0; m < n; ++m) {
    Complex coeff = 0.0;
    for (int j = 0; j < n; ++j) {
      coeff += rhs[j] * std::exp(-kI * (2.0 * kPi * double(m) * j / n));
    }
    coeff /= double(n);
    const int mode = mode_of(m);
    if (mode == 0) {
      sigma_hat[m] = coeff / mode0;
    } else {
      const double lam = a / (2.0 * std::abs(mode));
      lam_max = std::max(lam_max, lam);
      lam_min = std::min(lam_min, lam);
      sigma_hat[m] = coeff / lam;
    }
  }
  out.condition_estimate = lam_max / lam_min;
  if (out.condition_estimate > 1e12) {
    std::ostringstream os;
    os << "near-singular boundary operator (alpha + ln(1/a)/(2 pi) close to 0), "
          "condition estimate "
       << out.condition_estimate;
    out.warnings.push_back(os.str());
  }
  for (auto& w : thin_wire_advisories(disc, wave)) out.warnings.push_back(std::move(w));

  out.values.assign(n, Complex{});
  for (int j = 0; j < n; ++j) {
    for (int m = 0; m < n; ++m) {
      out.values[j] += sigma_hat[m] * std::exp(kI * (2.0 * kPi * double(m) * j / n));
    }
  }
  out.charge = 2.0 * kPi * a * sigma_hat[0];
  return out;
}

int series_terms_for(double kappa_a, double tail) {
  if (!(kappa_a > 0)) throw DomainError("series_terms_for: kappa*a must be positive");
  // Both |J_n(ka)| (the boundary residual of the truncated series) and
  // |J_n/H_n| decrease monotonically once n exceeds ka.
  const int first = std::max(1, static_cast<int>(std::ceil(kappa_a)));
  for (int n = first; n < kMaxBesselOrder; ++n) {
    const double j = std::abs(bessel_j(n, kappa_a));
    double ratio = 0.0;
    try {
      ratio = j / std::abs(hankel1(n, kappa_a));
    } catch (const std::overflow_error&) {
      ratio = 0.0;
    }
    if (j < tail && ratio < tail) return n;
  }
  throw std::out_of_range("series_terms_for: kappa*a too large for the order cap");
}

Complex exact_series(const Disc& disc, const IncidentWave& wave, int n_terms, Point2 x) {
  return exact_series_sample(disc, wave, n_terms, x).value;
}

ScalarSample exact_series_sample(const Disc& disc, const IncidentWave& wave, int n_terms,
                                 Point2 x) {
  if (n_terms < 0 || n_terms >= kMaxBesselOrder) {
    throw std::out_of_range("exact_series: n_terms must lie in [0, " +
                            std::to_string(kMaxBesselOrder - 1) + "]");
  }
  const double a = disc.radius;
  const double kappa = wave.kappa();
  const Point2 dir = wave.direction();
  const Point2 local = to_local(x - disc.center, dir);
  const double r = local.norm();
  if (r < a * (1.0 - 1e-12)) throw DomainError("exact_series: point inside the cylinder");

  const double theta = std::atan2(local.y, local.x);
  const double ka = kappa * a;
  const double kr = kappa * r;

  Complex sum = 0.0;
  Complex d_r = 0.0;
  Complex d_theta = 0.0;
  Complex h_prev = hankel1(0, kr);  // H_{n}
  for (int n = 0; n <= n_terms; ++n) {
    Complex c_n;
    try {
      c_n = -bessel_j(n, ka) / hankel1(n, ka);
    } catch (const std::overflow_error&) {
      break;  // |c_n| below double range; the remaining tail is zero
    }
    const Complex h_n = h_prev;
    const Complex h_next = hankel1(n + 1, kr);
    const Complex h_deriv = (n == 0) ? -h_next : 0.5 * (hankel1(n - 1, kr) - h_next);
    h_prev = h_next;

    Complex angular = 1.0;
    Complex angular_deriv = 0.0;
    if (n > 0) {
      const Complex e_pos = std::exp(kI * (double(n) * theta));
      const Complex e_neg = std::conj(e_pos);
      const double parity = (n % 2 == 0) ? 1.0 : -1.0;
      angular = e_pos + parity * e_neg;
      angular_deriv = kI * double(n) * (e_pos - parity * e_neg);
    }
    sum += c_n * h_n * angular;
    d_r += c_n * kappa * h_deriv * angular;
    d_theta += c_n * h_n * angular_deriv;
  }

  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const Complex g_local_x = c * d_r - (s / r) * d_theta;
  const Complex g_local_y = s * d_r + (c / r) * d_theta;
  const auto [gx, gy] = from_local(g_local_x, g_local_y, dir);

  const Complex phase = wave.value(disc.center);
  ScalarSample out = wave.sample(x);
  out.value += phase * sum;
  out.dx += phase * gx;
  out.dy += phase * gy;
  return out;
}

double ring_log_integral(double a, double psi) {
  (void)psi;
  if (!(a > 0)) throw DomainError("ring_log_integral: radius must be positive");
  return a * std::log(a);
}

double ring_log_integral_quadrature(double a, double psi) {
  if (!(a > 0)) throw DomainError("ring_log_integral_quadrature: radius must be positive");
  // phi = psi +- t folds the circle onto (0, pi] with the singularity at t = 0
  // only; r_st = 2 a sin(t/2), dt = a dphi.
  (void)psi;
  const auto integrand = [a](double t) { return 2.0 * std::log(2.0 * a * std::sin(0.5 * t)); };
  const auto est = quadrature::integrate(integrand, 0.0, kPi, 1e-13);
  return a / (2.0 * kPi) * est.value;
}

double log_sine_constant() { return -kPi * std::numbers::ln2; }

double log_sine_quadrature() {
  return quadrature::integrate([](double t) { return std::log(std::sin(t)); }, 0.0, kPi, 1e-13)
      .value;
}

double log_sine_period_quadrature(double psi) {
  (void)psi;
  const auto integrand = [](double t) { return 2.0 * std::log(std::sin(0.5 * t)); };
  return quadrature::integrate(integrand, 0.0, kPi, 1e-13).value;
}

}  // namespace thinwire
