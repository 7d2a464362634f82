#include "thinwire/validation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "thinwire/fields3d.hpp"
#include "thinwire/homogenize.hpp"
#include "thinwire/many_scatter.hpp"
#include "thinwire/single_scatter.hpp"
#include "thinwire/special_functions.hpp"

namespace thinwire {
namespace {

constexpr double kPi = std::numbers::pi;

CheckResult at_most(std::string name, double value, double tolerance, std::string detail = {}) {
  return {std::move(name), value <= tolerance, value, tolerance, std::move(detail)};
}

std::string list(const std::vector<double>& v) {
  std::ostringstream os;
  os.precision(3);
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
  return os.str();
}

bool decreasing(const std::vector<double>& v) {
  return std::adjacent_find(v.begin(), v.end(), std::less_equal<>()) == v.end();
}

const std::vector<double> kLadder{1e-2, 1e-3, 1e-4, 1e-6};

CheckResult wronskian() {
  double worst = 0.0;
  for (double x : {0.5, 5.0, 25.0}) {
    for (int n : {0, 3, 10}) {
      const double w = bessel_j(n + 1, x) * bessel_y(n, x) - bessel_j(n, x) * bessel_y(n + 1, x);
      const double expected = 2.0 / (kPi * x);
      worst = std::max(worst, std::abs(w - expected) / expected);
    }
  }
  return at_most("bessel_wronskian", worst, 1e-12, "relative, n in {0,3,10}, x in {0.5,5,25}");
}

CheckResult log_sine() {
  return at_most("log_sine_constant", std::abs(log_sine_quadrature() - log_sine_constant()), 1e-8);
}

CheckResult ring_integral() {
  double worst = 0.0;
  for (double a : {1e-1, 1e-2, 1e-3}) {
    for (double psi : {0.0, 1.3}) {
      worst = std::max(worst, std::abs(ring_log_integral_quadrature(a, psi) - a * std::log(a)));
    }
  }
  return at_most("ring_log_integral", worst, 1e-9, "a in {1e-1,1e-2,1e-3}");
}

std::vector<CheckResult> charge_and_field() {
  const IncidentWave wave(1.0);
  std::vector<double> raw, scaled, deviation;
  for (double a : kLadder) {
    const Disc disc({0.0, 0.0}, a);
    const Complex q_asym = charge_asymptotic(disc, wave);
    const Complex q_num = nystrom_charge(disc, wave, 64).charge;
    const double rel = std::abs(q_num - q_asym) / std::abs(q_num);
    raw.push_back(rel);
    scaled.push_back(rel * std::log(1.0 / a));

    const int terms = series_terms_for(wave.kappa() * a);
    double dev = 0.0;
    for (int i = 0; i < 64; ++i) {
      const double t = 2.0 * kPi * (i + 0.5) / 64;
      const Point2 x{std::cos(t), std::sin(t)};
      const Complex exact = exact_series(disc, wave, terms, x);
      dev = std::max(dev, std::abs(field_asymptotic(disc, wave, x) - exact) / std::abs(exact));
    }
    deviation.push_back(dev);
  }
  const double bound = *std::max_element(scaled.begin(), scaled.end());
  CheckResult charge = at_most("charge_asymptotics", bound, 5.0,
                               "rel. error x ln(1/a): " + list(scaled) + "; raw: " + list(raw));
  charge.passed = charge.passed && decreasing(raw);
  CheckResult field{"single_field_deviation", decreasing(deviation), deviation.back(), 0.0,
                    "max relative deviation on |x|=1: " + list(deviation)};
  return {charge, field};
}

CheckResult dirichlet_residual() {
  const IncidentWave wave(1.0);
  double worst = 0.0;
  for (double a : {1e-1, 1e-3}) {
    const Disc disc({0.2, -0.1}, a);
    const int terms = series_terms_for(a);
    for (int i = 0; i < 32; ++i) {
      const double t = 2.0 * kPi * i / 32;
      const Point2 s = disc.center + a * Point2{std::cos(t), std::sin(t)};
      worst = std::max(worst, std::abs(exact_series(disc, wave, terms, s)));
    }
  }
  return at_most("series_dirichlet_residual", worst, 1e-12);
}

std::vector<CheckResult> reduction() {
  const IncidentWave wave(1.0);
  const double a = 1e-3;
  const Disc disc({0.3, 0.2}, a);
  const CylinderArray one({disc.center}, a);
  const EffectiveField sol = solve_effective(one, wave);
  double err = std::abs(sol.values[0] - wave.value(disc.center));
  err = std::max(err, std::abs(sol.charges[0] - charge_asymptotic(disc, wave)));
  for (const Point2 x : {Point2{1.0, 0.0}, Point2{-0.4, 0.9}}) {
    err = std::max(err, std::abs(total_field(sol, one, wave, x) - field_asymptotic(disc, wave, x)));
  }

  const CylinderArray two({{-0.25, 0.1}, {0.25, 0.1}}, a);
  const EffectiveField pair = solve_effective(two, wave);
  const double mirror = std::abs(pair.values[0] - pair.values[1]);

  const CylinderArray sparse({{0.0, 0.0}, {0.7, 0.1}, {0.2, 0.9}, {-0.5, 0.4}}, 1e-4);
  const EffectiveField lu = solve_effective(sparse, wave);
  const EffectiveField jacobi = solve_effective_fixed_point(sparse, wave);
  double agree = 0.0;
  for (std::size_t j = 0; j < lu.values.size(); ++j) {
    agree = std::max(agree, std::abs(lu.values[j] - jacobi.values[j]));
  }
  return {at_most("single_cylinder_reduction", err, 1e-12),
          at_most("mirror_symmetry", mirror, 1e-10),
          at_most("fixed_point_agreement", agree, 1e-10)};
}

CheckResult homogenization(const ValidationOptions& options) {
  const DensityField field = DensityField::constant({}, 0.5);
  const IncidentWave wave(1.0);
  const std::vector<double> ladder{1e-3, 1e-6, 1e-9, 1e-12};
  bool ok = true;
  std::string detail;
  double last = 0.0;
  for (std::uint64_t seed : {options.seed, options.seed + 1}) {
    const ConsistencyReport report = limit_consistency(field, wave, ladder, seed, options.grid_n);
    std::vector<double> d;
    for (const auto& row : report.rows) d.push_back(row.discrepancy);
    ok = ok && report.nonincreasing;
    detail +=
        (detail.empty() ? "" : "; ") + std::string("seed ") + std::to_string(seed) + ": " + list(d);
    last = std::max(last, d.back());
  }
  return {"homogenization_consistency", ok, last, 0.0, detail};
}

CheckResult sampling_law() {
  const Rect unit{};
  const std::vector<DensityField> fields{DensityField::constant(unit, 0.5),
                                         DensityField::linear_ramp(unit, 0.1, 1.0),
                                         DensityField::gaussian_bump(unit, 1.0, {0.5, 0.5}, 0.2)};
  double worst = 0.0;
  for (const auto& field : fields) {
    for (double a : {1e-3, 1e-6}) {
      const CenterSample s = sample_centers(field, a, 7);
      const double log_inv = s.log_inverse_radius;
      const auto& squares = s.partition.squares();
      for (std::size_t p = 0; p < squares.size(); ++p) {
        const double expected = field(squares[p].center) * squares[p].area();
        worst = std::max(worst, std::abs(s.counts[p] / log_inv - expected) * log_inv);
      }
    }
  }
  return at_most("sampling_law", worst, 0.5, "max |count - ln(1/a) N |Delta||");
}

std::vector<CheckResult> refraction() {
  const double k = 1.3;
  const Refraction none = refraction_coefficient(1.7, 0.0, k);
  const Refraction critical = refraction_coefficient(1.7, k * k / (2.0 * kPi), k);
  const bool exact = none.n_sq == 1.7 && critical.n_sq == 0.0;

  const double kappa = 1.0;
  const double n = 0.05;
  const IncidentWave wave(kappa);
  const DensityField field = DensityField::constant({}, n);
  const double kappa_n = std::sqrt(kappa * kappa - 2.0 * kPi * n);
  std::vector<double> residual;
  for (int cells : {16, 32, 64}) {
    GridField g{{0.0, 0.0}, 1.0 / cells, 1.0 / cells, cells + 1, cells + 1, {}};
    for (int iy = 0; iy <= cells; ++iy) {
      for (int ix = 0; ix <= cells; ++ix) {
        g.values.push_back(std::exp(Complex(0.0, kappa_n * g.node(ix, iy).y)));
      }
    }
    residual.push_back(pde_residual(g, field, wave));
  }
  double lo = 1e300, hi = 0.0;
  for (std::size_t i = 1; i < residual.size(); ++i) {
    const double r = residual[i - 1] / residual[i];
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  CheckResult order{
      "dispersion_order", lo >= 3.5 && hi <= 4.5, lo, 3.5,
      "residual ratios per halving in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]"};
  return {{"refraction_endpoints", exact, critical.n_sq, 0.0, "n^2 at N=0 and N=k^2/(2 pi)"},
          order};
}

std::vector<CheckResult> maxwell() {
  const ModeParams params = ModeParams::from_wavenumbers(1.0, 0.6, 1.2, 1.5);
  const IncidentWave wave(params.kappa());
  const Disc disc({0.0, 0.0}, 0.05);
  const int terms = series_terms_for(params.kappa() * disc.radius);
  const ScalarField u = [&](Point2 x) { return exact_series_sample(disc, wave, terms, x); };

  std::vector<MaxwellResidual> r;
  for (int n : {5, 9, 17}) {
    const double h = 0.4 / (n - 1);
    r.push_back(
        maxwell_residual(sample_field_grid(u, params, {1.0, 0.8, 0.0}, h, n, n, n), params));
  }
  const double order_e = std::log2(r[1].curl_e / r[2].curl_e);
  const double order_h = std::log2(r[1].curl_h / r[2].curl_h);
  const double worst = std::max(std::abs(order_e - 2.0), std::abs(order_h - 2.0));
  CheckResult order{
      "maxwell_order", worst <= 0.2, std::min(order_e, order_h), 1.8,
      "observed orders curl E " + std::to_string(order_e) + ", curl H " + std::to_string(order_h)};

  const double tangential = tangential_e_on_cylinder(u, params, disc, 64, 0.3);

  double reproduce = 0.0;
  double h3 = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Point3 x{std::cos(1.7 * i) * 3.0, std::sin(0.9 * i) * 3.0, 0.1 * i - 5.0};
    const FieldSample a = fields_from_u(wave.sample(x.planar()), params, x.z);
    const FieldSample b = incident_field(params, x);
    for (int c = 0; c < 3; ++c) {
      reproduce = std::max({reproduce, std::abs(a.e[c] - b.e[c]), std::abs(a.h[c] - b.h[c])});
    }
    h3 = std::max(h3, std::abs(fields_from_u(u(x.planar() + Point2{1.0, 1.0}), params, x.z).h[2]));
  }
  const AmplitudeReport amplitude = amplitude_check(params, u, {1.0, 0.8}, 0.01, 9, 9);
  return {
      order, at_most("tangential_e_on_cylinder", tangential, 1e-10),
      at_most("incident_reproduction", reproduce, 1e-14), at_most("h3_zero", h3, 0.0),
      at_most("amplitude_equations", amplitude.worst(), 1e-4, "max residual of the six equations")};
}

}  // namespace

std::vector<CheckResult> run_validation(const ValidationOptions& options) {
  std::vector<CheckResult> out;
  const auto add = [&out](std::vector<CheckResult> v) {
    for (auto& c : v) out.push_back(std::move(c));
  };
  out.push_back(wronskian());
  out.push_back(log_sine());
  out.push_back(ring_integral());
  add(charge_and_field());
  out.push_back(dirichlet_residual());
  add(reduction());
  out.push_back(homogenization(options));
  out.push_back(sampling_law());
  add(refraction());
  add(maxwell());
  return out;
}

}  // namespace thinwire
