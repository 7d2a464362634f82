#include "thinwire/run.hpp"

#include <Eigen/Core>
#include <boost/version.hpp>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>

#include "thinwire/errors.hpp"
#include "thinwire/fields3d.hpp"
#include "thinwire/many_scatter.hpp"
#include "thinwire/single_scatter.hpp"
#include "thinwire/validation.hpp"

#ifndef THINWIRE_VERSION
#define THINWIRE_VERSION "unknown"
#endif

namespace thinwire {
namespace {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

[[noreturn]] void config_error(const std::string& field, const std::string& message) {
  throw ConfigError(field + ": " + message);
}

// --- config parsing -------------------------------------------------------------

void check_keys(const Json& j, const std::string& path, std::initializer_list<const char*> known) {
  if (!j.is_object()) config_error(path.empty() ? "config" : path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    bool found = false;
    for (const char* k : known) found = found || key == k;
    if (!found) config_error(path.empty() ? key : path + "." + key, "unknown field");
  }
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) config_error(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) config_error(path, "must be finite");
  return v;
}

std::int64_t integer(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) config_error(path, "expected an integer");
  return j.get<std::int64_t>();
}

std::string text(const Json& j, const std::string& path) {
  if (!j.is_string()) config_error(path, "expected a string");
  return j.get<std::string>();
}

Point2 point(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) config_error(path, "expected [x, y]");
  return {number(j[0], path + "[0]"), number(j[1], path + "[1]")};
}

Rect rect(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 4) config_error(path, "expected [x0, y0, x1, y1]");
  return {number(j[0], path + "[0]"), number(j[1], path + "[1]"), number(j[2], path + "[2]"),
          number(j[3], path + "[3]")};
}

template <typename T, typename Read>
void read_if(const Json& j, const char* key, const std::string& path, T& target, Read read) {
  if (j.contains(key)) target = read(j.at(key), path + "." + key);
}

DensitySpec density_from_json(const Json& j, DensitySpec d, const std::string& path) {
  check_keys(j, path, {"kind", "domain", "value", "left", "right", "peak", "center", "width"});
  read_if(j, "kind", path, d.kind, text);
  read_if(j, "domain", path, d.domain, rect);
  read_if(j, "value", path, d.value, number);
  read_if(j, "left", path, d.left, number);
  read_if(j, "right", path, d.right, number);
  read_if(j, "peak", path, d.peak, number);
  read_if(j, "center", path, d.center, point);
  read_if(j, "width", path, d.width, number);
  return d;
}

// --- bundle helpers -------------------------------------------------------------

Grid planar_grid(std::string name, const Rect& extent, int n, std::vector<std::string> components) {
  Grid g;
  g.name = std::move(name);
  g.axes = {"x", "y"};
  g.origin = {extent.x0, extent.y0};
  g.spacing = {extent.width() / (n - 1), extent.height() / (n - 1)};
  g.shape = {n, n};
  g.components = std::move(components);
  g.values.assign(g.components.size(), std::vector<Complex>(g.point_count()));
  return g;
}

void add_warnings(ResultBundle& b, const std::string& prefix, const std::vector<std::string>& w) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    b.metadata.emplace_back(prefix + ".warning" + std::to_string(i), w[i]);
  }
}

Cell yes_no(bool v) { return std::string(v ? "yes" : "no"); }

DensityField make_density(const DensitySpec& d) {
  if (d.kind == "constant") return DensityField::constant(d.domain, d.value);
  if (d.kind == "linear_ramp") return DensityField::linear_ramp(d.domain, d.left, d.right);
  if (d.kind == "gaussian_bump") {
    return DensityField::gaussian_bump(d.domain, d.peak, d.center, d.width);
  }
  config_error("geometry.density.kind", "expected constant, linear_ramp or gaussian_bump");
}

std::vector<double> single_ladder(const RunConfig& c) {
  return c.a_ladder.empty() ? std::vector<double>{c.a} : c.a_ladder;
}

// --- modes ----------------------------------------------------------------------

void run_single(const RunConfig& c, ResultBundle& b) {
  const IncidentWave wave(c.kappa);
  Table t{"charge",
          {"a", "kappa", "ln_inv_a", "Q_asym_re", "Q_asym_im", "Q_nystrom_re", "Q_nystrom_im",
           "rel_error", "rel_error_x_ln_inv_a", "field_deviation"},
          {}};
  for (double a : single_ladder(c)) {
    const Disc disc(c.center, a);
    const Complex q_asym = charge_asymptotic(disc, wave);
    const BoundaryDensity density = nystrom_charge(disc, wave, 64);
    add_warnings(b, "a=" + format_double(a), density.warnings);
    const double rel = std::abs(density.charge - q_asym) / std::abs(density.charge);
    const double log_inv = std::log(1.0 / a);
    const int terms = series_terms_for(c.kappa * a);
    double deviation = 0.0;
    for (int i = 0; i < 64; ++i) {
      const double t = 2.0 * std::numbers::pi * (i + 0.5) / 64;
      const Point2 x = c.center + Point2{std::cos(t), std::sin(t)};
      const Complex exact = exact_series(disc, wave, terms, x);
      deviation =
          std::max(deviation, std::abs(field_asymptotic(disc, wave, x) - exact) / std::abs(exact));
    }
    t.rows.push_back({a, c.kappa, log_inv, q_asym.real(), q_asym.imag(), density.charge.real(),
                      density.charge.imag(), rel, rel * log_inv, deviation});
  }
  b.tables.push_back(std::move(t));

  const Disc disc(c.center, c.a);
  const int terms = series_terms_for(c.kappa * c.a);
  Grid g = planar_grid("u", c.extent, c.grid_n, {"u_asym", "u_exact"});
  for (std::size_t p = 0; p < g.point_count(); ++p) {
    const Point2 x{g.coordinate(p, 0), g.coordinate(p, 1)};
    if (distance(x, disc.center) <= disc.radius) continue;  // zero inside the conductor
    g.values[0][p] = field_asymptotic(disc, wave, x);
    g.values[1][p] = exact_series(disc, wave, terms, x);
  }
  b.grids.push_back(std::move(g));
}

void run_many(const RunConfig& c, ResultBundle& b) {
  const IncidentWave wave(c.kappa);
  const CylinderArray array(c.centers, c.a);
  const EffectiveField sol = solve_effective(array, wave);
  add_warnings(b, "solve", sol.warnings);
  b.metadata.emplace_back("solve.condition_estimate", format_double(sol.condition_estimate));
  b.metadata.emplace_back("solve.residual_norm", format_double(sol.residual_norm));

  Table t{"effective_field", {"j", "x", "y", "u_e_re", "u_e_im", "Q_re", "Q_im"}, {}};
  for (std::size_t j = 0; j < array.count(); ++j) {
    const Point2 x = array.centers()[j];
    t.rows.push_back({double(j), x.x, x.y, sol.values[j].real(), sol.values[j].imag(),
                      sol.charges[j].real(), sol.charges[j].imag()});
  }
  b.tables.push_back(std::move(t));

  Grid g = planar_grid("u_total", c.extent, c.grid_n, {"u"});
  for (std::size_t p = 0; p < g.point_count(); ++p) {
    const Point2 x{g.coordinate(p, 0), g.coordinate(p, 1)};
    bool inside = false;
    for (const auto& ctr : array.centers()) inside = inside || distance(x, ctr) <= array.radius();
    if (!inside) g.values[0][p] = total_field(sol, array, wave, x);
  }
  b.grids.push_back(std::move(g));
}

void run_homogenize(const RunConfig& c, ResultBundle& b) {
  const IncidentWave wave(c.kappa);
  const DensityField field = make_density(c.density);
  const std::vector<double> ladder =
      c.a_ladder.empty() ? std::vector<double>{1e-3, 1e-6, 1e-9, 1e-12} : c.a_ladder;
  const ConsistencyReport report = limit_consistency(field, wave, ladder, c.seed, c.grid_n);
  const double integral = field.integral();

  Table t{"consistency",
          {"a", "count", "count_over_ln_inv_a", "integral_N", "min_distance", "discrepancy"},
          {}};
  for (const auto& row : report.rows) {
    t.rows.push_back(
        {row.a, double(row.count), row.total_weight, integral, row.min_distance, row.discrepancy});
  }
  b.tables.push_back(std::move(t));

  const CollocationSolution& col = report.collocation;
  b.tables.push_back({"collocation",
                      {"grid_n", "residual_norm", "condition_estimate", "pde_residual",
                       "discrepancy_nonincreasing"},
                      {{double(c.grid_n), col.residual_norm, col.condition_estimate,
                        pde_residual(col.grid, field, wave), yes_no(report.nonincreasing)}}});

  Grid g;
  g.name = "u_limit";
  g.axes = {"x", "y"};
  g.origin = {col.grid.origin.x, col.grid.origin.y};
  g.spacing = {col.grid.hx, col.grid.hy};
  g.shape = {col.grid.nx, col.grid.ny};
  g.components = {"u"};
  g.values = {col.grid.values};
  b.grids.push_back(std::move(g));
}

void run_refraction(const RunConfig& c, ResultBundle& b) {
  const double k = std::hypot(c.kappa, c.k3);
  const Refraction r = refraction_coefficient(c.n0_sq, c.n_density, k, c.kappa);
  b.tables.push_back({"refraction",
                      {"n0_sq", "N", "k", "n_sq", "kappa_N_sq", "evanescent"},
                      {{c.n0_sq, c.n_density, k, r.n_sq, *r.kappa_n_sq, yes_no(r.evanescent)}}});
  if (r.n_sq < 0) b.metadata.emplace_back("refraction.note", "negative n^2: evanescent medium");
  if (c.target_n_sq) {
    b.tables.push_back(
        {"inverse",
         {"n0_sq", "k", "target_n_sq", "N"},
         {{c.n0_sq, k, *c.target_n_sq, density_for_refraction(c.n0_sq, *c.target_n_sq, k)}}});
  }
}

void run_validate(const RunConfig& c, ResultBundle& b) {
  ValidationOptions options;
  options.seed = c.seed;
  options.grid_n = c.grid_n;
  Table t{"checks", {"check", "passed", "value", "tolerance", "detail"}, {}};
  bool all = true;
  for (const auto& check : run_validation(options)) {
    all = all && check.passed;
    t.rows.push_back(
        {check.name, yes_no(check.passed), check.value, check.tolerance, check.detail});
  }
  b.tables.push_back(std::move(t));
  b.metadata.emplace_back("checks.status", all ? "passed" : "failed");
}

void run_fields(const RunConfig& c, ResultBundle& b) {
  const ModeParams params = ModeParams::from_wavenumbers(c.kappa, c.k3, c.epsilon, c.mu);
  const IncidentWave wave(params.kappa());
  const Disc disc(c.center, c.a);
  const int terms = series_terms_for(params.kappa() * c.a);
  const ScalarField u = [&](Point2 x) {
    if (distance(x, disc.center) <= disc.radius) return ScalarSample{};
    return exact_series_sample(disc, wave, terms, x);
  };

  const double h = c.extent.width() / (c.grid_n - 1);
  const int ny = int(std::floor(c.extent.height() / h + 1e-9)) + 1;
  const FieldGrid fg =
      sample_field_grid(u, params, {c.extent.x0, c.extent.y0, 0.0}, h, c.grid_n, ny, c.grid_nz);
  Grid g;
  g.name = "fields";
  g.axes = {"x", "y", "z"};
  g.origin = {fg.origin.x, fg.origin.y, fg.origin.z};
  g.spacing = {h, h, h};
  g.shape = {fg.nx, fg.ny, fg.nz};
  g.components = {"E1", "E2", "E3", "H1", "H2", "H3"};
  for (int comp = 0; comp < 3; ++comp) g.values.push_back(fg.e[comp]);
  for (int comp = 0; comp < 3; ++comp) g.values.push_back(fg.h[comp]);

  // Residual block about one unit away from the cylinder.
  const Point3 block{disc.center.x + 1.0, disc.center.y + 0.8, 0.0};
  const MaxwellResidual r =
      maxwell_residual(sample_field_grid(u, params, block, 0.02, 9, 9, 9), params);
  const double tangential = tangential_e_on_cylinder(u, params, disc, 64);
  const AmplitudeReport amplitude = amplitude_check(params, u, block.planar(), 0.01, 9, 9);
  b.tables.push_back({"maxwell",
                      {"k", "kappa", "k3", "omega", "curl_e_residual", "curl_h_residual",
                       "div_e_residual", "tangential_e_max", "block_spacing"},
                      {{params.k(), params.kappa(), params.k3(), params.omega(), r.curl_e, r.curl_h,
                        r.divergence, tangential, 0.02}}});
  Table eq{"amplitude_equations", {"equation", "max_residual"}, {}};
  for (const auto& [name, value] : amplitude.equations) eq.rows.push_back({name, value});
  b.tables.push_back(std::move(eq));
  b.grids.push_back(std::move(g));
}

}  // namespace

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::single:
      return "single";
    case Mode::many:
      return "many";
    case Mode::homogenize:
      return "homogenize";
    case Mode::refraction:
      return "refraction";
    case Mode::validate:
      return "validate";
    case Mode::fields:
      return "fields";
  }
  return "unknown";
}

Mode mode_from_string(std::string_view name) {
  for (Mode m : {Mode::single, Mode::many, Mode::homogenize, Mode::refraction, Mode::validate,
                 Mode::fields}) {
    if (to_string(m) == name) return m;
  }
  config_error("mode", "unknown mode '" + std::string(name) + "'");
}

Format format_from_string(std::string_view name) {
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  config_error("output.format", "expected csv or json, got '" + std::string(name) + "'");
}

RunConfig config_from_json(const Json& j, RunConfig c) {
  check_keys(j, "", {"mode", "params", "geometry", "grid", "a_ladder", "seed", "output"});
  if (j.contains("mode")) c.mode = mode_from_string(text(j.at("mode"), "mode"));
  if (j.contains("params")) {
    const Json& p = j.at("params");
    check_keys(p, "params", {"kappa", "k3", "epsilon", "mu", "n0_sq", "n_density", "target_n_sq"});
    read_if(p, "kappa", "params", c.kappa, number);
    read_if(p, "k3", "params", c.k3, number);
    read_if(p, "epsilon", "params", c.epsilon, number);
    read_if(p, "mu", "params", c.mu, number);
    read_if(p, "n0_sq", "params", c.n0_sq, number);
    read_if(p, "n_density", "params", c.n_density, number);
    if (p.contains("target_n_sq"))
      c.target_n_sq = number(p.at("target_n_sq"), "params.target_n_sq");
  }
  if (j.contains("geometry")) {
    const Json& g = j.at("geometry");
    check_keys(g, "geometry", {"a", "center", "centers", "density"});
    read_if(g, "a", "geometry", c.a, number);
    read_if(g, "center", "geometry", c.center, point);
    if (g.contains("centers")) {
      const Json& list = g.at("centers");
      if (!list.is_array()) config_error("geometry.centers", "expected a list of [x, y]");
      c.centers.clear();
      for (std::size_t i = 0; i < list.size(); ++i) {
        c.centers.push_back(point(list[i], "geometry.centers[" + std::to_string(i) + "]"));
      }
    }
    if (g.contains("density"))
      c.density = density_from_json(g.at("density"), c.density, "geometry.density");
  }
  if (j.contains("grid")) {
    const Json& g = j.at("grid");
    check_keys(g, "grid", {"n", "nz", "extent"});
    if (g.contains("n")) c.grid_n = int(integer(g.at("n"), "grid.n"));
    if (g.contains("nz")) c.grid_nz = int(integer(g.at("nz"), "grid.nz"));
    read_if(g, "extent", "grid", c.extent, rect);
  }
  if (j.contains("a_ladder")) {
    const Json& list = j.at("a_ladder");
    if (!list.is_array()) config_error("a_ladder", "expected a list of numbers");
    c.a_ladder.clear();
    for (std::size_t i = 0; i < list.size(); ++i) {
      c.a_ladder.push_back(number(list[i], "a_ladder[" + std::to_string(i) + "]"));
    }
  }
  if (j.contains("seed")) {
    const Json& s = j.at("seed");
    if (!s.is_number_unsigned()) config_error("seed", "expected a non-negative integer");
    c.seed = s.get<std::uint64_t>();
  }
  if (j.contains("output")) {
    const Json& o = j.at("output");
    check_keys(o, "output", {"path", "format"});
    read_if(o, "path", "output", c.out_path, text);
    if (o.contains("format")) c.format = format_from_string(text(o.at("format"), "output.format"));
  }
  return c;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("config: " + std::string(e.what()));
  }
  return config_from_json(j, std::move(base));
}

OrderedJson config_to_json(const RunConfig& c) {
  const auto pt = [](Point2 p) { return OrderedJson::array({p.x, p.y}); };
  const auto rc = [](const Rect& r) { return OrderedJson::array({r.x0, r.y0, r.x1, r.y1}); };
  OrderedJson j;
  j["mode"] = std::string(to_string(c.mode));
  j["params"] = {{"kappa", c.kappa}, {"k3", c.k3},       {"epsilon", c.epsilon},
                 {"mu", c.mu},       {"n0_sq", c.n0_sq}, {"n_density", c.n_density}};
  if (c.target_n_sq) j["params"]["target_n_sq"] = *c.target_n_sq;
  OrderedJson centers = OrderedJson::array();
  for (const auto& p : c.centers) centers.push_back(pt(p));
  const DensitySpec& d = c.density;
  j["geometry"] = {{"a", c.a},
                   {"center", pt(c.center)},
                   {"centers", centers},
                   {"density",
                    {{"kind", d.kind},
                     {"domain", rc(d.domain)},
                     {"value", d.value},
                     {"left", d.left},
                     {"right", d.right},
                     {"peak", d.peak},
                     {"center", pt(d.center)},
                     {"width", d.width}}}};
  j["grid"] = {{"n", c.grid_n}, {"nz", c.grid_nz}, {"extent", rc(c.extent)}};
  j["a_ladder"] = c.a_ladder;
  j["seed"] = c.seed;
  j["output"] = {{"path", c.out_path}, {"format", c.format == Format::csv ? "csv" : "json"}};
  return j;
}

void validate_config(const RunConfig& c) {
  if (!(c.kappa > 0)) config_error("params.kappa", "must be > 0");
  if (!(c.epsilon > 0)) config_error("params.epsilon", "must be > 0");
  if (!(c.mu > 0)) config_error("params.mu", "must be > 0");
  try {
    (void)ModeParams::from_wavenumbers(c.kappa, c.k3, c.epsilon, c.mu);
  } catch (const DomainError& e) {
    config_error("params", e.what());
  }
  const auto radius_ok = [](double a) { return a > 0 && a < 1; };
  if (!radius_ok(c.a)) config_error("geometry.a", "must lie in (0, 1)");
  for (std::size_t i = 0; i < c.a_ladder.size(); ++i) {
    if (!radius_ok(c.a_ladder[i])) {
      config_error("a_ladder[" + std::to_string(i) + "]", "must lie in (0, 1)");
    }
  }
  if (!(c.extent.width() > 0) || !(c.extent.height() > 0)) {
    config_error("grid.extent", "must be a non-degenerate rectangle");
  }
  switch (c.mode) {
    case Mode::single:
    case Mode::many:
      if (c.grid_n < 2) config_error("grid.n", "must be >= 2");
      if (c.mode == Mode::many) {
        if (c.centers.empty()) config_error("geometry.centers", "must not be empty");
        try {
          (void)CylinderArray(c.centers, c.a);
        } catch (const DomainError& e) {
          config_error("geometry.centers", e.what());
        }
      }
      break;
    case Mode::homogenize:
      if (c.grid_n < 8) config_error("grid.n", "must be >= 8 for homogenize");
      try {
        (void)make_density(c.density);
      } catch (const DomainError& e) {
        config_error("geometry.density", e.what());
      }
      break;
    case Mode::refraction:
      if (!(c.n_density >= 0)) config_error("params.n_density", "must be >= 0");
      if (c.n0_sq == 0 && c.target_n_sq) config_error("params.n0_sq", "must be non-zero");
      break;
    case Mode::validate:
      if (c.grid_n < 8) config_error("grid.n", "must be >= 8 for validate");
      break;
    case Mode::fields:
      if (c.grid_n < 2) config_error("grid.n", "must be >= 2");
      if (c.grid_nz < 1) config_error("grid.nz", "must be >= 1");
      break;
  }
}

ResultBundle run(const RunConfig& config) {
  validate_config(config);
  const auto start = std::chrono::steady_clock::now();
  ResultBundle b;
  b.metadata = {{"thinwire.version", THINWIRE_VERSION},
                {"eigen.version", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                      std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                      std::to_string(EIGEN_MINOR_VERSION)},
                {"boost.version", BOOST_LIB_VERSION},
                {"mode", std::string(to_string(config.mode))},
                {"config", config_to_json(config).dump()}};
  switch (config.mode) {
    case Mode::single:
      run_single(config, b);
      break;
    case Mode::many:
      run_many(config, b);
      break;
    case Mode::homogenize:
      run_homogenize(config, b);
      break;
    case Mode::refraction:
      run_refraction(config, b);
      break;
    case Mode::validate:
      run_validate(config, b);
      break;
    case Mode::fields:
      run_fields(config, b);
      break;
  }
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  b.timings.emplace_back("total_seconds", elapsed.count());
  return b;
}

bool has_failed_checks(const ResultBundle& bundle) {
  const std::string* status = bundle.meta("checks.status");
  return status != nullptr && *status != "passed";
}

int execute(const RunConfig& config, std::ostream& stdout_sink, std::ostream& diagnostics) {
  try {
    const ResultBundle bundle = run(config);
    if (config.out_path.empty()) {
      stdout_sink << serialize(bundle, config.format);
      stdout_sink.flush();
      if (!stdout_sink) throw IoError("failed writing to standard output");
    } else {
      write_bundle(bundle, config.out_path, config.format);
    }
    if (has_failed_checks(bundle)) {
      diagnostics << "thinwire: one or more checks failed\n";
      return exit_code::check_failed;
    }
    return exit_code::ok;
  } catch (const ConfigError& e) {
    diagnostics << "thinwire: config error: " << e.what() << '\n';
    return exit_code::config;
  } catch (const IoError& e) {
    diagnostics << "thinwire: I/O error: " << e.what() << '\n';
    return exit_code::io;
  } catch (const NumericalError& e) {
    diagnostics << "thinwire: numerical error: " << e.what();
    if (e.condition_estimate() > 0)
      diagnostics << " (condition estimate " << e.condition_estimate() << ')';
    diagnostics << '\n';
    return exit_code::numerical;
  } catch (const DomainError& e) {
    diagnostics << "thinwire: invalid input: " << e.what() << '\n';
    return exit_code::config;
  } catch (const std::exception& e) {
    diagnostics << "thinwire: numerical error: " << e.what() << '\n';
    return exit_code::numerical;
  }
}

}  // namespace thinwire
