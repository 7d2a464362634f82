#include "thinwire/many_scatter.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "thinwire/errors.hpp"
#include "thinwire/special_functions.hpp"

namespace thinwire {
namespace {

double coupling_weight(double a) {
  if (!(a > 0) || !(a < 1)) throw DomainError("many_scatter: radius must satisfy 0 < a < 1");
  return 2.0 * std::numbers::pi / std::log(1.0 / a);
}

void check_outside(const CylinderArray& array, Point2 x, std::size_t skip) {
  const auto& c = array.centers();
  for (std::size_t m = 0; m < c.size(); ++m) {
    if (m == skip) continue;
    if (!(distance(x, c[m]) > array.radius())) {
      std::ostringstream os;
      os << "evaluation point (" << x.x << ", " << x.y << ") lies inside cylinder " << m;
      throw DomainError(os.str());
    }
  }
}

void check_solution(const EffectiveField& solution, const CylinderArray& array) {
  if (solution.values.size() != array.count()) {
    throw std::invalid_argument("effective field does not match the cylinder array");
  }
}

}  // namespace

CylinderArray::CylinderArray(std::vector<Point2> centers, double radius)
    : centers_(std::move(centers)),
      radius_(radius),
      min_distance_(std::numeric_limits<double>::infinity()) {
  if (!(radius > 0) || !std::isfinite(radius)) {
    throw DomainError("CylinderArray: radius must be positive");
  }
  const double contact = 2.0 * radius;
  for (std::size_t i = 0; i < centers_.size(); ++i) {
    for (std::size_t j = i + 1; j < centers_.size(); ++j) {
      const double d = distance(centers_[i], centers_[j]);
      if (d <= contact) {
        std::ostringstream os;
        os << "CylinderArray: cylinders " << i << " and " << j << " overlap (distance " << d
           << ", diameter " << 2.0 * radius << ")";
        throw DomainError(os.str());
      }
      min_distance_ = std::min(min_distance_, d);
    }
  }
}

LinearSystem assemble_system(const CylinderArray& array, const IncidentWave& wave) {
  const double weight = coupling_weight(array.radius());
  const GreenKernel kernel(wave.kappa());
  const auto& c = array.centers();
  const auto m = static_cast<Eigen::Index>(c.size());

  LinearSystem sys;
  sys.matrix = Eigen::MatrixXcd::Identity(m, m);
  sys.rhs.resize(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    sys.rhs(j) = wave.value(c[j]);
    for (Eigen::Index k = j + 1; k < m; ++k) {
      const Complex entry = weight * green2d(kernel, c[j], c[k]);
      sys.matrix(j, k) = entry;
      sys.matrix(k, j) = entry;
    }
  }
  if (array.count() > 1 && array.min_distance() <= 10.0 * array.radius()) {
    std::ostringstream os;
    os << "minimum separation d = " << array.min_distance()
       << " is at most 10a (d/a = " << array.separation_ratio()
       << "); point-scatterer approximation is strained";
    sys.warnings.push_back(os.str());
  }
  return sys;
}

EffectiveField solve_effective(const CylinderArray& array, const IncidentWave& wave) {
  LinearSystem sys = assemble_system(array, wave);
  EffectiveField out;
  out.warnings = std::move(sys.warnings);
  const double weight = coupling_weight(array.radius());
  if (array.count() == 0) return out;

  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(sys.matrix);
  const double rcond = lu.rcond();
  out.condition_estimate = rcond > 0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  if (!(out.condition_estimate < kMaxCondition)) {
    std::ostringstream os;
    os << "effective-field system is near-singular (condition estimate " << out.condition_estimate
       << ")";
    throw NumericalError(os.str(), out.condition_estimate);
  }
  const Eigen::VectorXcd u = lu.solve(sys.rhs);
  out.residual_norm = (sys.matrix * u - sys.rhs).lpNorm<Eigen::Infinity>();
  out.values.assign(u.data(), u.data() + u.size());
  out.charges.reserve(out.values.size());
  for (const Complex& v : out.values) out.charges.push_back(-weight * v);
  return out;
}

EffectiveField solve_effective_fixed_point(const CylinderArray& array, const IncidentWave& wave,
                                           double tolerance, int max_iterations) {
  const LinearSystem sys = assemble_system(array, wave);
  const double weight = coupling_weight(array.radius());
  const Eigen::Index m = sys.rhs.size();
  const Eigen::MatrixXcd off = sys.matrix - Eigen::MatrixXcd::Identity(m, m);

  Eigen::VectorXcd u = sys.rhs;
  bool converged = m == 0;
  for (int it = 0; it < max_iterations && !converged; ++it) {
    const Eigen::VectorXcd next = sys.rhs - off * u;
    converged = (next - u).lpNorm<Eigen::Infinity>() <= tolerance;
    u = next;
  }
  if (!converged) {
    throw NumericalError("fixed-point iteration did not converge; coupling too strong");
  }
  EffectiveField out;
  out.warnings = sys.warnings;
  out.residual_norm = m == 0 ? 0.0 : (sys.matrix * u - sys.rhs).lpNorm<Eigen::Infinity>();
  out.values.assign(u.data(), u.data() + u.size());
  for (const Complex& v : out.values) out.charges.push_back(-weight * v);
  return out;
}

ScalarSample total_field_sample(const EffectiveField& solution, const CylinderArray& array,
                                const IncidentWave& wave, Point2 x) {
  check_solution(solution, array);
  check_outside(array, x, array.count());
  const double weight = coupling_weight(array.radius());
  const GreenKernel kernel(wave.kappa());
  ScalarSample s = wave.sample(x);
  const auto& c = array.centers();
  for (std::size_t m = 0; m < c.size(); ++m) {
    const Complex q = -weight * solution.values[m];
    const auto [gx, gy] = green2d_gradient(kernel, x, c[m]);
    s.value += q * green2d(kernel, x, c[m]);
    s.dx += q * gx;
    s.dy += q * gy;
  }
  return s;
}

Complex total_field(const EffectiveField& solution, const CylinderArray& array,
                    const IncidentWave& wave, Point2 x) {
  check_solution(solution, array);
  check_outside(array, x, array.count());
  const double weight = coupling_weight(array.radius());
  const GreenKernel kernel(wave.kappa());
  Complex u = wave.value(x);
  const auto& c = array.centers();
  for (std::size_t m = 0; m < c.size(); ++m) {
    u -= weight * solution.values[m] * green2d(kernel, x, c[m]);
  }
  return u;
}

Complex effective_field_at(const EffectiveField& solution, const CylinderArray& array,
                           const IncidentWave& wave, Point2 x, std::size_t j) {
  check_solution(solution, array);
  if (j >= array.count())
    throw std::out_of_range("effective_field_at: cylinder index out of range");
  check_outside(array, x, j);
  const double weight = coupling_weight(array.radius());
  const GreenKernel kernel(wave.kappa());
  Complex u = wave.value(x);
  const auto& c = array.centers();
  for (std::size_t m = 0; m < c.size(); ++m) {
    if (m == j) continue;
    u -= weight * solution.values[m] * green2d(kernel, x, c[m]);
  }
  return u;
}

}  // namespace thinwire
