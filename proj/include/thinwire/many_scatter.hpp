#pragma once

// Multiple scattering by M thin cylinders of common radius a. The scattered
// field of cylinder m is a monopole of charge Q_m = -2 pi u_e(x_m) / ln(1/a),
// where u_e(x_m) is the effective field acting on it; the u_e values solve
//
//   u_e(x_j) + (2 pi / ln(1/a)) sum_{m != j} g(x_j, x_m) u_e(x_m) = u0(x_j).

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "thinwire/geometry.hpp"
#include "thinwire/scalar_field.hpp"
#include "thinwire/single_scatter.hpp"

namespace thinwire {

class CylinderArray {
 public:
  /// Throws DomainError on a non-positive radius or on overlapping discs
  /// (|x_i - x_j| <= 2a).
  CylinderArray(std::vector<Point2> centers, double radius);

  [[nodiscard]] const std::vector<Point2>& centers() const noexcept { return centers_; }
  [[nodiscard]] double radius() const noexcept { return radius_; }
  [[nodiscard]] std::size_t count() const noexcept { return centers_.size(); }
  /// Smallest pairwise center distance d; +inf for fewer than two cylinders.
  [[nodiscard]] double min_distance() const noexcept { return min_distance_; }
  [[nodiscard]] double separation_ratio() const noexcept { return min_distance_ / radius_; }

 private:
  std::vector<Point2> centers_;
  double radius_;
  double min_distance_;
};

struct LinearSystem {
  Eigen::MatrixXcd matrix;
  Eigen::VectorXcd rhs;
  std::vector<std::string> warnings;
};

/// A_jj = 1, A_jm = (2 pi / ln(1/a)) g(x_j, x_m), rhs_j = u0(x_j). Requires
/// 0 < a < 1; warns when d <= 10 a.
LinearSystem assemble_system(const CylinderArray& array, const IncidentWave& wave);

struct EffectiveField {
  std::vector<Complex> values;   ///< u_e(x_j)
  std::vector<Complex> charges;  ///< Q_j = -2 pi u_e(x_j) / ln(1/a)
  double residual_norm = 0.0;    ///< ||A u_e - rhs||_inf
  double condition_estimate = 1.0;
  std::vector<std::string> warnings;
};

inline constexpr double kMaxCondition = 1e12;

/// Dense LU solve with partial pivoting. Throws NumericalError when the
/// 1-norm condition estimate reaches kMaxCondition.
EffectiveField solve_effective(const CylinderArray& array, const IncidentWave& wave);

/// Jacobi iteration on the same system. Reference solver; converges only when
/// the coupling is weak. Throws NumericalError if it fails to reach
/// `tolerance` (max-norm update) within `max_iterations`.
EffectiveField solve_effective_fixed_point(const CylinderArray& array, const IncidentWave& wave,
                                           double tolerance = 1e-14, int max_iterations = 10000);

/// u0(x) - (2 pi / ln(1/a)) sum_m g(x, x_m) u_e(x_m); x outside every cylinder.
Complex total_field(const EffectiveField& solution, const CylinderArray& array,
                    const IncidentWave& wave, Point2 x);

/// total_field with its closed-form gradient.
ScalarSample total_field_sample(const EffectiveField& solution, const CylinderArray& array,
                                const IncidentWave& wave, Point2 x);

/// Field acting on cylinder j: total_field without the j-th term. x may be the
/// center of cylinder j but must lie outside every other cylinder.
Complex effective_field_at(const EffectiveField& solution, const CylinderArray& array,
                           const IncidentWave& wave, Point2 x, std::size_t j);

}  // namespace thinwire
