#pragma once

#include <functional>

namespace thinwire::quadrature {

struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

/// Adaptive double-exponential (tanh-sinh) quadrature on [lo, hi]. Integrable
/// endpoint singularities such as ln|t - lo| are handled without special
/// treatment.
Estimate integrate(const std::function<double(double)>& f, double lo, double hi,
                   double tolerance = 1e-12);

}  // namespace thinwire::quadrature
