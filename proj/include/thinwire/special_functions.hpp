#pragma once

// Cylinder functions of real argument and the free-space Green's function of
// the 2-D Helmholtz operator.
//
// J_n and Y_n are evaluated by power series below kSeriesLimit and by the
// Hankel large-argument expansion above it (orders 0 and 1); higher orders
// come from recurrence: forward for Y_n, Miller's backward scheme for J_n.
// All internal sums run in long double.

#include "thinwire/geometry.hpp"

namespace thinwire {

enum class BesselKind { J, Y };

inline constexpr int kMaxBesselOrder = 60;
inline constexpr double kSeriesLimit = 17.0;

/// J_order(x) or Y_order(x). Negative orders follow J_{-n} = (-1)^n J_n.
/// Throws DomainError for x <= 0 (Y) or x < 0 (J), std::out_of_range for
/// |order| > kMaxBesselOrder, std::overflow_error if Y_n(x) is not
/// representable.
double bessel(BesselKind kind, int order, double x);

inline double bessel_j(int order, double x) { return bessel(BesselKind::J, order, x); }
inline double bessel_y(int order, double x) { return bessel(BesselKind::Y, order, x); }

/// H^(1)_order(x) = J_order(x) + i Y_order(x).
Complex hankel1(int order, double x);

/// Transverse wavenumber of the kernel g = (i/4) H^(1)_0(kappa r).
class GreenKernel {
 public:
  explicit GreenKernel(double kappa);
  [[nodiscard]] double kappa() const noexcept { return kappa_; }

 private:
  double kappa_;
};

/// (i/4) H^(1)_0(kappa |x - t|). Throws DomainError when x == t.
Complex green2d(const GreenKernel& kernel, Point2 x, Point2 t);

/// Gradient of green2d with respect to x: -(i kappa / 4) H^(1)_1(kappa r) (x - t)/r.
std::pair<Complex, Complex> green2d_gradient(const GreenKernel& kernel, Point2 x, Point2 t);

/// Constant term of the small-r expansion g = alpha + ln(1/r)/(2 pi) + o(1):
/// alpha = i/4 + ln(2/kappa)/(2 pi).
Complex alpha(double kappa);

/// Exact constant of the small-r expansion of green2d, alpha(kappa) - gamma/(2 pi)
/// with gamma the Euler-Mascheroni constant. alpha() omits the gamma term.
Complex green_regular_constant(double kappa);

}  // namespace thinwire
