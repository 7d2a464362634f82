#pragma once

// Homogenization of a dense array of thin cylinders.
//
// Centers are distributed so that a region Delta holds ln(1/a) * int_Delta N
// of them. As a -> 0 the effective field converges to the solution of
//
//   u(x) = u0(x) - 2 pi int_D g(x, y) N(y) u(y) dy,
//
// equivalently (Laplacian + kappa^2 - 2 pi N) u = 0, so a constant density N
// lowers the squared refraction coefficient to n0^2 (1 - 2 pi N / k^2).

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "thinwire/geometry.hpp"
#include "thinwire/many_scatter.hpp"
#include "thinwire/single_scatter.hpp"

namespace thinwire {

/// Axis-aligned rectangle [x0, x1] x [y0, y1].
struct Rect {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 1.0;
  double y1 = 1.0;

  [[nodiscard]] double width() const { return x1 - x0; }
  [[nodiscard]] double height() const { return y1 - y0; }
  [[nodiscard]] double area() const { return width() * height(); }
  [[nodiscard]] bool contains(Point2 p) const {
    return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1;
  }
};

/// Continuous, non-negative density N on a rectangle D (zero outside D).
class DensityField {
 public:
  using Function = std::function<double(Point2)>;

  /// Validates N >= 0 and continuity on sampling grids; throws DomainError.
  DensityField(Rect domain, Function density, std::string description);

  static DensityField constant(Rect domain, double value);
  /// N(x, y) = left + (right - left) (x - x0) / width.
  static DensityField linear_ramp(Rect domain, double left, double right);
  /// N(x, y) = peak exp(-|p - center|^2 / (2 width^2)).
  static DensityField gaussian_bump(Rect domain, double peak, Point2 center, double width);

  [[nodiscard]] double operator()(Point2 p) const;
  [[nodiscard]] const Rect& domain() const noexcept { return domain_; }
  [[nodiscard]] const std::string& description() const noexcept { return description_; }
  [[nodiscard]] std::optional<double> constant_value() const noexcept { return constant_; }
  /// Midpoint-rule integral of N over D on a 256 x 256 grid.
  [[nodiscard]] double integral() const;

 private:
  Rect domain_;
  Function density_;
  std::string description_;
  std::optional<double> constant_;
};

struct Square {
  Point2 center;
  double side = 0.0;

  [[nodiscard]] double area() const { return side * side; }
  [[nodiscard]] Rect bounds() const {
    return {center.x - side / 2, center.y - side / 2, center.x + side / 2, center.y + side / 2};
  }
};

/// Tiling of D by congruent squares without common interior points.
class Partition {
 public:
  /// Squares of side width/cells_x; throws DomainError if they do not tile D.
  Partition(Rect domain, int cells_x);

  [[nodiscard]] const std::vector<Square>& squares() const noexcept { return squares_; }
  [[nodiscard]] double side() const noexcept { return side_; }
  [[nodiscard]] int cells_x() const noexcept { return cells_x_; }
  [[nodiscard]] int cells_y() const noexcept { return cells_y_; }
  /// Index of the square containing p (points on shared edges go to the
  /// square with the larger index), or -1 outside D.
  [[nodiscard]] int index_of(Point2 p) const;

 private:
  Rect domain_;
  int cells_x_;
  int cells_y_;
  double side_;
  std::vector<Square> squares_;
};

/// Square count per side used by sample_centers when none is given: squares
/// of side b = a^{1/4}, coarsened until the average square expects at least
/// four centers.
int default_cells_per_side(const DensityField& field, double a);

struct SamplingOptions {
  std::optional<int> cells_per_side;  ///< overrides default_cells_per_side
  bool jitter = true;                 ///< seeded jitter inside each subgrid slot
};

struct CenterSample {
  CylinderArray array;
  Partition partition;
  std::vector<int> counts;  ///< centers per partition square
  double spacing = 0.0;     ///< guaranteed minimum center distance d
  double log_inverse_radius = 0.0;
};

/// Places round(ln(1/a) N(y_p) |Delta_p|) centers in every partition square at
/// mutual distance >= d = max(a^{1/2}, 3a). Centers occupy slots of a subgrid
/// picked along a Fibonacci lattice, optionally jittered inside their slot by
/// a generator seeded with `seed`. Deterministic in `seed`. Throws
/// NumericalError naming the square when the count does not fit.
CenterSample sample_centers(const DensityField& field, double a, std::uint64_t seed,
                            const SamplingOptions& options = {});

/// Complex values on a regular grid of nodes, row-major (index iy * nx + ix).
struct GridField {
  Point2 origin;  ///< position of node (0, 0)
  double hx = 0.0;
  double hy = 0.0;
  int nx = 0;
  int ny = 0;
  std::vector<Complex> values;

  [[nodiscard]] Point2 node(int ix, int iy) const {
    return {origin.x + ix * hx, origin.y + iy * hy};
  }
  [[nodiscard]] Complex at(int ix, int iy) const { return values[std::size_t(iy) * nx + ix]; }
};

/// Bilinear interpolation; points beyond the outermost nodes are extrapolated
/// linearly from the boundary cell.
Complex interpolate(const GridField& grid, Point2 p);

struct CollocationSolution {
  GridField grid;               ///< nodes at cell centers of a grid_n x grid_n split of D
  std::vector<double> weights;  ///< cell areas
  double residual_norm = 0.0;   ///< ||K u - u0||_inf of the discrete system
  double condition_estimate = 1.0;

  [[nodiscard]] Complex interpolate(Point2 p) const { return thinwire::interpolate(grid, p); }
};

/// int_{[-hx/2,hx/2] x [-hy/2,hy/2]} ln(1/|r|) dA, in closed form.
double cell_log_integral(double hx, double hy);

/// Collocation of the limiting integral equation at cell centers. Off-diagonal
/// cells use the midpoint rule; the singular self cell uses the small-r
/// expansion of g with the cell integral of ln(1/r) in closed form.
/// grid_n >= 8. Throws NumericalError on a near-singular system.
CollocationSolution collocation_solve(const DensityField& field, const IncidentWave& wave,
                                      int grid_n);

/// I + [2 pi g(x_i, x_j) w_j]_{i != j}: the collocation matrix of the integral
/// equation at arbitrary nodes with node weights w_j = N |Delta| share. With
/// w_j = 1/ln(1/a) this is the effective-field system matrix.
Eigen::MatrixXcd collocation_matrix(const std::vector<Point2>& nodes,
                                    const std::vector<double>& weights, const IncidentWave& wave);

/// max over interior nodes of |Lap_h u + kappa^2 u - 2 pi N u| with the
/// 5-point Laplacian. Throws std::invalid_argument when nx or ny < 3.
double pde_residual(const GridField& grid, const DensityField& field, const IncidentWave& wave);

struct Refraction {
  double n_sq = 0.0;                 ///< n0^2 (1 - 2 pi N / k^2)
  std::optional<double> kappa_n_sq;  ///< kappa^2 - 2 pi N, when kappa was given
  bool evanescent = false;           ///< kappa_n_sq < 0
};

/// Effective squared refraction coefficient for constant density N >= 0.
/// Negative n^2 is returned as is. Throws DomainError for k <= 0 or N < 0.
Refraction refraction_coefficient(double n0_sq, double density, double k,
                                  std::optional<double> kappa = std::nullopt);

/// Density that yields target_n_sq: N = k^2 (1 - n^2/n0^2) / (2 pi).
double density_for_refraction(double n0_sq, double target_n_sq, double k);

struct ConsistencyRow {
  double a = 0.0;
  std::size_t count = 0;
  double total_weight = 0.0;  ///< M / ln(1/a), compare with int_D N
  double min_distance = 0.0;
  double discrepancy = 0.0;  ///< max_j |u_e(x_j) - u_collocation(x_j)|
};

struct ConsistencyReport {
  std::vector<ConsistencyRow> rows;
  bool nonincreasing = true;
  CollocationSolution collocation;
};

/// For every a: sample centers, solve the effective-field system, and compare
/// with the interpolated collocation solution at the centers.
ConsistencyReport limit_consistency(const DensityField& field, const IncidentWave& wave,
                                    const std::vector<double>& a_ladder, std::uint64_t seed,
                                    int grid_n = 32, const SamplingOptions& options = {});

}  // namespace thinwire
