#include "thinwire/special_functions.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "thinwire/errors.hpp"

namespace thinwire {
namespace {

using Real = long double;

constexpr Real kPi = std::numbers::pi_v<long double>;
constexpr Real kEulerGamma = std::numbers::egamma_v<long double>;

// Ascending series for J_n, n >= 0. Terms alternate; below kSeriesLimit the
// largest term is a few 1e5 times the function envelope, which long double
// absorbs.
Real j_series(int n, Real x) {
  const Real half = x / 2;
  const Real q = -half * half;
  Real term = 1;
  for (int k = 1; k <= n; ++k) term *= half / k;
  Real sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= q / (Real(k) * Real(k + n));
    sum += term;
    if (std::fabs(term) <= std::numeric_limits<Real>::epsilon() * std::fabs(sum) && k > half) {
      break;
    }
  }
  return sum;
}

// Ascending series for Y_0 and Y_1 (n = 0 or 1), with psi(m+1) = H_m - gamma.
Real y_series(int n, Real x) {
  const Real half = x / 2;
  const Real q = -half * half;
  Real finite = 0;
  if (n == 1) finite = -1 / (kPi * half);  // -(1/pi) (0!) (x/2)^{-1}
  // psi(k+1) + psi(n+k+1)
  Real harmonic_k = 0;                        // H_k
  Real harmonic_nk = (n == 1) ? 1.0L : 0.0L;  // H_{n+k}
  Real term = (n == 1) ? half : 1.0L;         // (x/2)^{2k+n} / (k! (n+k)!)
  Real sum = term * (harmonic_k + harmonic_nk - 2 * kEulerGamma);
  for (int k = 1; k < 500; ++k) {
    term *= q / (Real(k) * Real(k + n));
    harmonic_k += 1.0L / k;
    harmonic_nk += 1.0L / (k + n);
    const Real contrib = term * (harmonic_k + harmonic_nk - 2 * kEulerGamma);
    sum += contrib;
    if (std::fabs(contrib) <= std::numeric_limits<Real>::epsilon() * std::fabs(sum) && k > half) {
      break;
    }
  }
  return finite + (2 / kPi) * std::log(half) * j_series(n, x) - sum / kPi;
}

struct JYPair {
  Real j;
  Real y;
};

// Hankel asymptotic expansion for orders 0 and 1, x >= kSeriesLimit. The
// divergent P/Q sums are cut at their smallest term, below e^{-2x}.
JYPair jy_asymptotic(int n, Real x) {
  const Real mu = 4.0L * n * n;
  Real p = 1;
  Real q = 0;
  Real term = 1;
  Real last = std::numeric_limits<Real>::infinity();
  for (int k = 1; k < 200; ++k) {
    const Real odd = 2 * k - 1;
    term *= (mu - odd * odd) / (Real(k) * 8 * x);
    const Real mag = std::fabs(term);
    if (mag == 0 || mag >= last) break;
    last = mag;
    // k odd contributes to Q with sign (-1)^{(k-1)/2}, k even to P with (-1)^{k/2}.
    if (k % 2 == 1) {
      q += ((k / 2) % 2 == 0 ? term : -term);
    } else {
      p += ((k / 2) % 2 == 0 ? term : -term);
    }
    if (mag < 1e-22L) break;
  }
  // chi = x - (n/2 + 1/4) pi, expanded so that cos x and sin x see the exact argument.
  const Real phase = (Real(n) / 2 + 0.25L) * kPi;
  const Real cx = std::cos(x);
  const Real sx = std::sin(x);
  const Real cos_chi = cx * std::cos(phase) + sx * std::sin(phase);
  const Real sin_chi = sx * std::cos(phase) - cx * std::sin(phase);
  const Real scale = std::sqrt(2 / (kPi * x));
  return {scale * (p * cos_chi - q * sin_chi), scale * (p * sin_chi + q * cos_chi)};
}

JYPair jy_low(int n, Real x) {
  if (x < kSeriesLimit) return {j_series(n, x), y_series(n, x)};
  return jy_asymptotic(n, x);
}

// Miller backward recurrence normalised to whichever of J_0, J_1 is larger.
Real j_miller(int n, Real x, const JYPair& p0, const JYPair& p1) {
  const int base = std::max(n, static_cast<int>(x));
  int start = base + 20 + static_cast<int>(std::sqrt(40.0L * base));
  start += start % 2;
  Real next = 0;      // f_{m+1}
  Real cur = 1e-30L;  // f_m
  Real at_n = 0;
  Real at_0 = 0;
  Real at_1 = 0;
  for (int m = start; m >= 1; --m) {
    const Real prev = (2 * m / x) * cur - next;  // f_{m-1}
    next = cur;
    cur = prev;
    if (std::fabs(cur) > 1e300L) {
      cur *= 1e-300L;
      next *= 1e-300L;
      at_n *= 1e-300L;
      at_1 *= 1e-300L;
    }
    if (m - 1 == n) at_n = cur;
    if (m - 1 == 1) at_1 = cur;
  }
  at_0 = cur;
  if (n == 1) at_n = at_1;
  if (n == 0) at_n = at_0;
  if (std::fabs(p0.j) >= std::fabs(p1.j)) return at_n * (p0.j / at_0);
  return at_n * (p1.j / at_1);
}

void check_order(int order) {
  if (order < -kMaxBesselOrder || order > kMaxBesselOrder) {
    throw std::out_of_range("bessel: order " + std::to_string(order) + " outside [-" +
                            std::to_string(kMaxBesselOrder) + ", " +
                            std::to_string(kMaxBesselOrder) + "]");
  }
}

Real y_order(int n, Real x) {
  const JYPair p0 = jy_low(0, x);
  if (n == 0) return p0.y;
  const JYPair p1 = jy_low(1, x);
  Real ym = p0.y;
  Real y = p1.y;
  for (int m = 1; m < n; ++m) {
    const Real yn = (2 * m / x) * y - ym;
    ym = y;
    y = yn;
  }
  return y;
}

Real j_order(int n, Real x) {
  if (x == 0) return n == 0 ? 1 : 0;
  if (x < kSeriesLimit) return j_series(n, x);
  const JYPair p0 = jy_asymptotic(0, x);
  if (n == 0) return p0.j;
  const JYPair p1 = jy_asymptotic(1, x);
  if (n == 1) return p1.j;
  return j_miller(n, x, p0, p1);
}

}  // namespace

double bessel(BesselKind kind, int order, double x) {
  check_order(order);
  if (!std::isfinite(x)) throw DomainError("bessel: non-finite argument");
  const int n = order < 0 ? -order : order;
  const double sign = (order < 0 && n % 2 == 1) ? -1.0 : 1.0;
  if (kind == BesselKind::J) {
    if (x < 0) throw DomainError("bessel J: negative argument");
    return sign * static_cast<double>(j_order(n, x));
  }
  if (x <= 0) throw DomainError("bessel Y: argument must be positive");
  const double y = static_cast<double>(y_order(n, x));
  if (!std::isfinite(y)) {
    throw std::overflow_error("bessel Y: Y_" + std::to_string(n) + "(" + std::to_string(x) +
                              ") exceeds double range");
  }
  return sign * y;
}

Complex hankel1(int order, double x) {
  if (!(x > 0)) throw DomainError("hankel1: argument must be positive");
  return {bessel(BesselKind::J, order, x), bessel(BesselKind::Y, order, x)};
}

GreenKernel::GreenKernel(double kappa) : kappa_(kappa) {
  if (!(kappa > 0) || !std::isfinite(kappa)) {
    throw DomainError("GreenKernel: kappa must be finite and positive");
  }
}

Complex green2d(const GreenKernel& kernel, Point2 x, Point2 t) {
  const double r = distance(x, t);
  if (r == 0) throw DomainError("green2d: coincident source and target points");
  return Complex(0.0, 0.25) * hankel1(0, kernel.kappa() * r);
}

std::pair<Complex, Complex> green2d_gradient(const GreenKernel& kernel, Point2 x, Point2 t) {
  const Point2 d = x - t;
  const double r = d.norm();
  if (r == 0) throw DomainError("green2d_gradient: coincident source and target points");
  const Complex radial = Complex(0.0, -0.25) * kernel.kappa() * hankel1(1, kernel.kappa() * r);
  return {radial * (d.x / r), radial * (d.y / r)};
}

Complex alpha(double kappa) {
  if (!(kappa > 0) || !std::isfinite(kappa)) throw DomainError("alpha: kappa must be positive");
  return {std::log(2.0 / kappa) / (2.0 * std::numbers::pi), 0.25};
}

Complex green_regular_constant(double kappa) {
  return alpha(kappa) - std::numbers::egamma / (2.0 * std::numbers::pi);
}

}  // namespace thinwire
