#include "thinwire/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>

namespace thinwire::quadrature {

Estimate integrate(const std::function<double(double)>& f, double lo, double hi, double tolerance) {
  if (lo == hi) return {};
  boost::math::quadrature::tanh_sinh<double> rule(15);
  double error = 0.0;
  double l1 = 0.0;
  // The stopping rule is relative to the L1 norm of f.
  const double rel = std::min(tolerance, 1e-14);
  const double value = rule.integrate(f, lo, hi, rel, &error, &l1);
  return {value, error};
}

}  // namespace thinwire::quadrature
