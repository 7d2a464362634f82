#include "thinwire/homogenize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "thinwire/errors.hpp"
#include "thinwire/special_functions.hpp"

namespace thinwire {
namespace {

constexpr double kPi = std::numbers::pi;

void check_rect(const Rect& r) {
  if (!(r.width() > 0) || !(r.height() > 0) || !std::isfinite(r.area())) {
    throw DomainError("density domain must be a non-degenerate rectangle");
  }
}

// Largest difference between neighbouring samples on an (n+1) x (n+1) grid.
double sampled_oscillation(const Rect& d, const DensityField::Function& f, int n,
                           double* min_value) {
  std::vector<double> v(std::size_t(n + 1) * (n + 1));
  for (int iy = 0; iy <= n; ++iy) {
    for (int ix = 0; ix <= n; ++ix) {
      const Point2 p{d.x0 + d.width() * ix / n, d.y0 + d.height() * iy / n};
      const double value = f(p);
      if (!std::isfinite(value)) throw DomainError("density is not finite at a sample point");
      v[std::size_t(iy) * (n + 1) + ix] = value;
      *min_value = std::min(*min_value, value);
    }
  }
  double osc = 0.0;
  for (int iy = 0; iy <= n; ++iy) {
    for (int ix = 0; ix <= n; ++ix) {
      const double here = v[std::size_t(iy) * (n + 1) + ix];
      if (ix < n) osc = std::max(osc, std::abs(v[std::size_t(iy) * (n + 1) + ix + 1] - here));
      if (iy < n) osc = std::max(osc, std::abs(v[std::size_t(iy + 1) * (n + 1) + ix] - here));
    }
  }
  return osc;
}

double log_inverse(double a) {
  if (!(a > 0) || !(a < 1)) throw DomainError("cylinder radius must satisfy 0 < a < 1");
  return std::log(1.0 / a);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finaliser
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double unit_uniform(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

// Picks `count` distinct slots of an m x m subgrid from the Fibonacci
// (golden-ratio rank-1) lattice x_k = (k + 1/2)/count, y_k = frac(k / phi).
// Collisions after snapping walk to the next free slot.
std::vector<std::pair<int, int>> pick_slots(int count, int m) {
  constexpr double golden = 0.61803398874989484820;
  const long long total = static_cast<long long>(m) * m;
  std::unordered_set<long long> used;
  std::vector<std::pair<int, int>> slots;
  slots.reserve(count);
  for (int k = 0; k < count; ++k) {
    const double px = (k + 0.5) / count;
    const double py = std::fmod(k * golden, 1.0);
    long long key = static_cast<long long>(std::min(m - 1, static_cast<int>(py * m))) * m +
                    std::min(m - 1, static_cast<int>(px * m));
    while (used.count(key)) key = (key + 1) % total;
    used.insert(key);
    slots.emplace_back(static_cast<int>(key % m), static_cast<int>(key / m));
  }
  return slots;
}

}  // namespace

// --- DensityField -----------------------------------------------------------

DensityField::DensityField(Rect domain, Function density, std::string description)
    : domain_(domain), density_(std::move(density)), description_(std::move(description)) {
  check_rect(domain_);
  if (!density_) throw DomainError("density function is empty");
  double min_value = std::numeric_limits<double>::infinity();
  const double coarse = sampled_oscillation(domain_, density_, 64, &min_value);
  const double fine = sampled_oscillation(domain_, density_, 256, &min_value);
  if (min_value < 0) throw DomainError("density N must be non-negative on D");
  // A continuous N has neighbour differences that shrink under refinement; a
  // jump keeps them fixed.
  if (coarse > 1e-12 && fine > 0.6 * coarse) {
    throw DomainError("density appears discontinuous (or unresolved) on D: '" + description_ + "'");
  }
}

DensityField DensityField::constant(Rect domain, double value) {
  DensityField f(domain, [value](Point2) { return value; }, "constant " + std::to_string(value));
  f.constant_ = value;
  return f;
}

DensityField DensityField::linear_ramp(Rect domain, double left, double right) {
  const double x0 = domain.x0;
  const double w = domain.width();
  return {domain, [=](Point2 p) { return left + (right - left) * (p.x - x0) / w; },
          "linear ramp " + std::to_string(left) + " -> " + std::to_string(right)};
}

DensityField DensityField::gaussian_bump(Rect domain, double peak, Point2 center, double width) {
  if (!(width > 0)) throw DomainError("gaussian_bump: width must be positive");
  return {domain,
          [=](Point2 p) {
            const Point2 d = p - center;
            return peak * std::exp(-d.dot(d) / (2.0 * width * width));
          },
          "gaussian bump peak " + std::to_string(peak) + " width " + std::to_string(width)};
}

double DensityField::operator()(Point2 p) const {
  if (!domain_.contains(p)) return 0.0;
  return density_(p);
}

double DensityField::integral() const {
  if (constant_) return *constant_ * domain_.area();
  constexpr int n = 256;
  const double hx = domain_.width() / n;
  const double hy = domain_.height() / n;
  double sum = 0.0;
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      sum += density_({domain_.x0 + (ix + 0.5) * hx, domain_.y0 + (iy + 0.5) * hy});
    }
  }
  return sum * hx * hy;
}

// --- Partition ----------------------------------------------------------------

Partition::Partition(Rect domain, int cells_x) : domain_(domain), cells_x_(cells_x) {
  check_rect(domain_);
  if (cells_x < 1) throw DomainError("Partition: need at least one square per side");
  side_ = domain_.width() / cells_x;
  const double rows = domain_.height() / side_;
  cells_y_ = static_cast<int>(std::lround(rows));
  if (cells_y_ < 1 || std::abs(rows - cells_y_) > 1e-9 * std::max(1.0, rows)) {
    std::ostringstream os;
    os << "Partition: squares of side " << side_ << " do not tile a " << domain_.width() << " x "
       << domain_.height() << " domain";
    throw DomainError(os.str());
  }
  squares_.reserve(std::size_t(cells_x_) * cells_y_);
  for (int iy = 0; iy < cells_y_; ++iy) {
    for (int ix = 0; ix < cells_x_; ++ix) {
      squares_.push_back(
          {{domain_.x0 + (ix + 0.5) * side_, domain_.y0 + (iy + 0.5) * side_}, side_});
    }
  }
}

int Partition::index_of(Point2 p) const {
  if (!domain_.contains(p)) return -1;
  const int ix = std::min(cells_x_ - 1, static_cast<int>((p.x - domain_.x0) / side_));
  const int iy = std::min(cells_y_ - 1, static_cast<int>((p.y - domain_.y0) / side_));
  return iy * cells_x_ + ix;
}

// --- sampling -----------------------------------------------------------------

int default_cells_per_side(const DensityField& field, double a) {
  const double log_inv = log_inverse(a);
  const Rect& d = field.domain();
  const double shorter = std::min(d.width(), d.height());
  double side = std::pow(a, 0.25);
  const double expected_total = log_inv * field.integral();
  if (expected_total > 0) side = std::max(side, std::sqrt(4.0 * d.area() / expected_total));
  side = std::min(side, shorter);
  // The square side must divide the width and the height; grow the count from
  // the width until the height is tiled as well.
  int cells = std::max(1, static_cast<int>(std::floor(d.width() / side)));
  for (int c = cells; c >= 1; --c) {
    const double rows = d.height() / (d.width() / c);
    if (std::abs(rows - std::round(rows)) <= 1e-9 * std::max(1.0, rows)) return c;
  }
  throw DomainError("default_cells_per_side: domain aspect ratio admits no square tiling");
}

CenterSample sample_centers(const DensityField& field, double a, std::uint64_t seed,
                            const SamplingOptions& options) {
  const double log_inv = log_inverse(a);
  const double spacing = std::max(std::sqrt(a), 3.0 * a);
  const int cells = options.cells_per_side.value_or(default_cells_per_side(field, a));
  Partition partition(field.domain(), cells);

  std::vector<Point2> centers;
  std::vector<int> counts;
  counts.reserve(partition.squares().size());
  for (std::size_t p = 0; p < partition.squares().size(); ++p) {
    const Square& sq = partition.squares()[p];
    const double expected = log_inv * field(sq.center) * sq.area();
    const auto count = static_cast<long long>(std::llround(expected));
    const double capacity_side = std::floor(sq.side / spacing);
    if (count > 0 && (capacity_side < 1 || double(count) > capacity_side * capacity_side)) {
      std::ostringstream os;
      os << "infeasible density: square " << p << " centred at (" << sq.center.x << ", "
         << sq.center.y << ") needs " << count << " centers but holds at most "
         << capacity_side * capacity_side << " at spacing " << spacing;
      throw NumericalError(os.str());
    }
    counts.push_back(static_cast<int>(count));
    if (count == 0) continue;

    const int wanted_side =
        std::max(64, static_cast<int>(std::ceil(2.0 * std::sqrt(double(count)))));
    const int m = static_cast<int>(std::min<double>(capacity_side, wanted_side));
    const double slot = sq.side / m;
    const double slack = 0.5 * (slot - spacing);  // jitter keeps spacing >= d
    std::mt19937_64 rng(mix_seed(seed, p));
    const Point2 corner{sq.center.x - sq.side / 2, sq.center.y - sq.side / 2};
    for (const auto& [ix, iy] : pick_slots(static_cast<int>(count), m)) {
      Point2 c{corner.x + (ix + 0.5) * slot, corner.y + (iy + 0.5) * slot};
      if (options.jitter && slack > 0) {
        c.x += slack * (2.0 * unit_uniform(rng) - 1.0);
        c.y += slack * (2.0 * unit_uniform(rng) - 1.0);
      }
      centers.push_back(c);
    }
  }
  return {CylinderArray(std::move(centers), a), std::move(partition), std::move(counts), spacing,
          log_inv};
}

// --- collocation ----------------------------------------------------------------

Complex interpolate(const GridField& grid, Point2 p) {
  if (grid.nx < 2 || grid.ny < 2) throw std::invalid_argument("interpolate: grid needs 2x2 nodes");
  const double tx = (p.x - grid.origin.x) / grid.hx;
  const double ty = (p.y - grid.origin.y) / grid.hy;
  const int ix = std::clamp(static_cast<int>(std::floor(tx)), 0, grid.nx - 2);
  const int iy = std::clamp(static_cast<int>(std::floor(ty)), 0, grid.ny - 2);
  const double fx = tx - ix;
  const double fy = ty - iy;
  return (1 - fx) * (1 - fy) * grid.at(ix, iy) + fx * (1 - fy) * grid.at(ix + 1, iy) +
         (1 - fx) * fy * grid.at(ix, iy + 1) + fx * fy * grid.at(ix + 1, iy + 1);
}

double cell_log_integral(double hx, double hy) {
  // int_0^p int_0^q ln sqrt(x^2 + y^2) dy dx
  const double p = hx / 2;
  const double q = hy / 2;
  const double quarter = 0.5 * (p * q * std::log(p * p + q * q) - 3.0 * p * q +
                                p * p * std::atan(q / p) + q * q * std::atan(p / q));
  return -4.0 * quarter;
}

CollocationSolution collocation_solve(const DensityField& field, const IncidentWave& wave,
                                      int grid_n) {
  if (grid_n < 8) throw std::invalid_argument("collocation_solve: grid_n must be >= 8");
  const Rect& d = field.domain();
  const int n = grid_n;
  CollocationSolution out;
  GridField& grid = out.grid;
  grid.nx = n;
  grid.ny = n;
  grid.hx = d.width() / n;
  grid.hy = d.height() / n;
  grid.origin = {d.x0 + grid.hx / 2, d.y0 + grid.hy / 2};
  const double cell = grid.hx * grid.hy;
  const int size = n * n;
  out.weights.assign(size, cell);

  std::vector<double> density(size);
  Eigen::VectorXcd rhs(size);
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      const Point2 p = grid.node(ix, iy);
      density[iy * n + ix] = field(p);
      rhs(iy * n + ix) = wave.value(p);
    }
  }

  // g depends only on the index offset on a regular grid.
  const GreenKernel kernel(wave.kappa());
  std::vector<Complex> offset_kernel(std::size_t(n) * n);
  for (int dy = 0; dy < n; ++dy) {
    for (int dx = 0; dx < n; ++dx) {
      if (dx == 0 && dy == 0) {
        offset_kernel[0] = green_regular_constant(wave.kappa()) * cell +
                           cell_log_integral(grid.hx, grid.hy) / (2.0 * kPi);
      } else {
        offset_kernel[std::size_t(dy) * n + dx] =
            green2d(kernel, {0.0, 0.0}, {dx * grid.hx, dy * grid.hy}) * cell;
      }
    }
  }

  Eigen::MatrixXcd k = Eigen::MatrixXcd::Identity(size, size);
  for (int j = 0; j < size; ++j) {
    if (density[j] == 0.0) continue;
    const int jx = j % n;
    const int jy = j / n;
    const double scale = 2.0 * kPi * density[j];
    for (int i = 0; i < size; ++i) {
      const int dx = std::abs(i % n - jx);
      const int dy = std::abs(i / n - jy);
      k(i, j) += scale * offset_kernel[std::size_t(dy) * n + dx];
    }
  }

  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(k);
  const double rcond = lu.rcond();
  out.condition_estimate = rcond > 0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  if (!(out.condition_estimate < kMaxCondition)) {
    std::ostringstream os;
    os << "collocation system is near-singular (condition estimate " << out.condition_estimate
       << ")";
    throw NumericalError(os.str(), out.condition_estimate);
  }
  const Eigen::VectorXcd u = lu.solve(rhs);
  out.residual_norm = (k * u - rhs).lpNorm<Eigen::Infinity>();
  grid.values.assign(u.data(), u.data() + u.size());
  return out;
}

Eigen::MatrixXcd collocation_matrix(const std::vector<Point2>& nodes,
                                    const std::vector<double>& weights, const IncidentWave& wave) {
  if (nodes.size() != weights.size()) {
    throw std::invalid_argument("collocation_matrix: one weight per node required");
  }
  const GreenKernel kernel(wave.kappa());
  const auto m = static_cast<Eigen::Index>(nodes.size());
  Eigen::MatrixXcd k = Eigen::MatrixXcd::Identity(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      if (i != j) k(i, j) = 2.0 * kPi * weights[j] * green2d(kernel, nodes[i], nodes[j]);
    }
  }
  return k;
}

double pde_residual(const GridField& grid, const DensityField& field, const IncidentWave& wave) {
  if (grid.nx < 3 || grid.ny < 3) {
    throw std::invalid_argument("pde_residual: grid too coarse for the 5-point stencil");
  }
  if (grid.values.size() != std::size_t(grid.nx) * grid.ny) {
    throw std::invalid_argument("pde_residual: value count does not match the grid");
  }
  const double k2 = wave.kappa() * wave.kappa();
  const double ihx2 = 1.0 / (grid.hx * grid.hx);
  const double ihy2 = 1.0 / (grid.hy * grid.hy);
  double worst = 0.0;
  for (int iy = 1; iy + 1 < grid.ny; ++iy) {
    for (int ix = 1; ix + 1 < grid.nx; ++ix) {
      const Complex u = grid.at(ix, iy);
      const Complex lap = (grid.at(ix + 1, iy) - 2.0 * u + grid.at(ix - 1, iy)) * ihx2 +
                          (grid.at(ix, iy + 1) - 2.0 * u + grid.at(ix, iy - 1)) * ihy2;
      const double n_here = field(grid.node(ix, iy));
      worst = std::max(worst, std::abs(lap + (k2 - 2.0 * kPi * n_here) * u));
    }
  }
  return worst;
}

// --- refraction -----------------------------------------------------------------

Refraction refraction_coefficient(double n0_sq, double density, double k,
                                  std::optional<double> kappa) {
  if (!(k > 0) || !std::isfinite(k))
    throw DomainError("refraction_coefficient: k must be positive");
  if (!(density >= 0)) throw DomainError("refraction_coefficient: density must be non-negative");
  // Written as 1 - N / N_crit so that N = k^2/(2 pi) gives exactly zero.
  const double critical = k * k / (2.0 * kPi);
  Refraction out;
  out.n_sq = n0_sq * (1.0 - density / critical);
  if (kappa) {
    out.kappa_n_sq = *kappa * *kappa - 2.0 * kPi * density;
    out.evanescent = *out.kappa_n_sq < 0;
  }
  return out;
}

double density_for_refraction(double n0_sq, double target_n_sq, double k) {
  if (!(k > 0)) throw DomainError("density_for_refraction: k must be positive");
  if (n0_sq == 0) throw DomainError("density_for_refraction: n0^2 must be non-zero");
  return k * k * (1.0 - target_n_sq / n0_sq) / (2.0 * kPi);
}

// --- limit study ----------------------------------------------------------------

ConsistencyReport limit_consistency(const DensityField& field, const IncidentWave& wave,
                                    const std::vector<double>& a_ladder, std::uint64_t seed,
                                    int grid_n, const SamplingOptions& options) {
  ConsistencyReport report;
  report.collocation = collocation_solve(field, wave, grid_n);
  for (double a : a_ladder) {
    const CenterSample sample = sample_centers(field, a, seed, options);
    const EffectiveField solution = solve_effective(sample.array, wave);
    ConsistencyRow row;
    row.a = a;
    row.count = sample.array.count();
    row.total_weight = double(row.count) / sample.log_inverse_radius;
    row.min_distance = sample.array.min_distance();
    const auto& centers = sample.array.centers();
    for (std::size_t j = 0; j < centers.size(); ++j) {
      const Complex limit = report.collocation.interpolate(centers[j]);
      row.discrepancy = std::max(row.discrepancy, std::abs(solution.values[j] - limit));
    }
    if (!report.rows.empty() && row.discrepancy > report.rows.back().discrepancy) {
      report.nonincreasing = false;
    }
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace thinwire
