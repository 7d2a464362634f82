#pragma once

// Scattering of a plane wave by one thin perfectly conducting circular
// cylinder (Dirichlet problem for the 2-D Helmholtz equation).
//
// Three routes to the same physics:
//  * the thin-wire asymptotics (charge_asymptotic, field_asymptotic);
//  * the split-kernel boundary equation on the circle, solved exactly mode by
//    mode (nystrom_charge);
//  * the separation-of-variables series for the Dirichlet circle
//    (exact_series), used as ground truth.

#include <string>
#include <vector>

#include "thinwire/geometry.hpp"
#include "thinwire/scalar_field.hpp"

namespace thinwire {

/// Cross-section of one cylinder.
struct Disc {
  Disc(Point2 center, double radius);

  Point2 center;
  double radius;
};

/// Plane wave u0(x) = exp(i kappa dir.x). The default direction is +y.
class IncidentWave {
 public:
  explicit IncidentWave(double kappa, Point2 direction = {0.0, 1.0});

  [[nodiscard]] double kappa() const noexcept { return kappa_; }
  [[nodiscard]] Point2 direction() const noexcept { return direction_; }

  [[nodiscard]] Complex value(Point2 x) const;
  [[nodiscard]] ScalarSample sample(Point2 x) const;

 private:
  double kappa_;
  Point2 direction_;
};

/// Human-readable advisories for a disc/wave pair (kappa a > 0.1 strains the
/// thin-wire regime). Empty when nothing is worth flagging.
std::vector<std::string> thin_wire_advisories(const Disc& disc, const IncidentWave& wave);

/// Q = -2 pi u0(center) / ln(1/a). Requires 0 < a < 1.
Complex charge_asymptotic(const Disc& disc, const IncidentWave& wave);

/// u0(x) - (2 pi / ln(1/a)) g(x, center) u0(center), for |x - center| > a.
Complex field_asymptotic(const Disc& disc, const IncidentWave& wave, Point2 x);

/// field_asymptotic with its closed-form gradient.
ScalarSample field_asymptotic_sample(const Disc& disc, const IncidentWave& wave, Point2 x);

/// Boundary density on the circle, sampled at equispaced angles.
struct BoundaryDensity {
  std::vector<double> nodes;    ///< angles theta_i in [0, 2 pi)
  std::vector<Complex> values;  ///< sigma(theta_i)
  Complex charge;               ///< Q = integral of sigma over the circle
  double condition_estimate = 1.0;
  std::vector<std::string> warnings;
};

/// Solves -u0(s) = alpha(kappa) Q + (1/2pi) int ln(1/|s-t|) sigma(t) dt on the
/// circle. The log kernel is diagonal in the Fourier basis (eigenvalue a ln(1/a)
/// for mode 0, a/(2|n|) otherwise), so the trigonometric interpolant of the
/// right-hand side is inverted exactly. n_modes >= 16.
BoundaryDensity nystrom_charge(const Disc& disc, const IncidentWave& wave, int n_modes);

/// Smallest N with |J_n(ka)/H_n(ka)| < tail for all n >= N. Throws
/// std::out_of_range when that needs more than kMaxBesselOrder terms.
int series_terms_for(double kappa_a, double tail = 1e-14);

/// u0(x) + sum_{|n|<=n_terms} c_n H_n(kappa r) e^{i n theta}, c_n = -J_n(ka)/H_n(ka),
/// in the frame where the incidence is along +y. Valid for |x - center| >= a.
Complex exact_series(const Disc& disc, const IncidentWave& wave, int n_terms, Point2 x);

/// exact_series with its term-by-term gradient.
ScalarSample exact_series_sample(const Disc& disc, const IncidentWave& wave, int n_terms, Point2 x);

/// (1/2pi) int_{|t|=a} ln|s-t| dt for s on the circle. Equals a ln a for every
/// position angle psi of s.
double ring_log_integral(double a, double psi);

/// The same integral by adaptive quadrature in the angular offset from s.
double ring_log_integral_quadrature(double a, double psi);

/// int_0^pi ln sin(theta) dtheta = -pi ln 2.
double log_sine_constant();

/// Quadrature value of int_0^pi ln sin(theta) dtheta.
double log_sine_quadrature();

/// Quadrature value of int_0^{2pi} ln|sin((psi - phi)/2)| dphi.
double log_sine_period_quadrature(double psi);

}  // namespace thinwire
