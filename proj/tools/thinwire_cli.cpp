// thinwire: command-line front end.
//
//   thinwire <single|many|homogenize|refraction|validate|fields> [options]
//
// Options given on the command line override values from --config.
// Exit codes: 0 ok, 2 config error, 3 numerical error, 4 I/O error,
// 5 validate finished but a check failed.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "thinwire/errors.hpp"
#include "thinwire/run.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::optional<double> a, kappa, k3, epsilon, mu, n_density, n0_sq, target_n_sq;
  std::optional<int> grid_n, grid_nz;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> format, out;
  std::vector<double> a_ladder;
};

thinwire::RunConfig build_config(thinwire::Mode mode, const Overrides& o) {
  thinwire::RunConfig c;
  if (!o.config_path.empty()) c = thinwire::load_config(o.config_path);
  c.mode = mode;
  if (o.a) c.a = *o.a;
  if (o.kappa) c.kappa = *o.kappa;
  if (o.k3) c.k3 = *o.k3;
  if (o.epsilon) c.epsilon = *o.epsilon;
  if (o.mu) c.mu = *o.mu;
  if (o.n0_sq) c.n0_sq = *o.n0_sq;
  if (o.target_n_sq) c.target_n_sq = *o.target_n_sq;
  if (o.n_density) {
    c.n_density = *o.n_density;
    c.density.kind = "constant";
    c.density.value = *o.n_density;
  }
  if (o.grid_n) c.grid_n = *o.grid_n;
  if (o.grid_nz) c.grid_nz = *o.grid_nz;
  if (o.seed) c.seed = *o.seed;
  if (o.format) c.format = thinwire::format_from_string(*o.format);
  if (o.out) c.out_path = *o.out;
  if (!o.a_ladder.empty()) c.a_ladder = o.a_ladder;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scattering by many thin perfectly conducting cylinders"};
  app.require_subcommand(1);
  app.fallthrough();

  Overrides o;
  app.add_option("--config", o.config_path, "JSON run configuration");
  app.add_option("--a", o.a, "cylinder radius");
  app.add_option("--kappa", o.kappa, "transverse wavenumber");
  app.add_option("--k3", o.k3, "axial wavenumber");
  app.add_option("--epsilon", o.epsilon, "background permittivity");
  app.add_option("--mu", o.mu, "background permeability");
  app.add_option("--n-density", o.n_density, "cylinder density N (constant)");
  app.add_option("--n0-sq", o.n0_sq, "background n0^2 (refraction)");
  app.add_option("--target-n-sq", o.target_n_sq, "target n^2 for the inverse density (refraction)");
  app.add_option("--grid-n", o.grid_n, "grid points (or collocation cells) per side");
  app.add_option("--grid-nz", o.grid_nz, "z samples of the fields grid");
  app.add_option("--a-ladder", o.a_ladder, "radii for convergence studies")->delimiter(',');
  app.add_option("--seed", o.seed, "sampling seed");
  app.add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", o.out, "output path (default: standard output)");

  const std::vector<std::pair<thinwire::Mode, const char*>> modes{
      {thinwire::Mode::single, "single cylinder: charge and field asymptotics vs exact"},
      {thinwire::Mode::many, "effective-field system for a cylinder array"},
      {thinwire::Mode::homogenize, "sampled arrays vs the limiting integral equation"},
      {thinwire::Mode::refraction, "effective refraction coefficient"},
      {thinwire::Mode::validate, "run the self-check suite"},
      {thinwire::Mode::fields, "3-D electromagnetic fields and Maxwell residuals"}};
  for (const auto& [mode, help] : modes) {
    app.add_subcommand(std::string(thinwire::to_string(mode)), help);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "thinwire: config error: " << e.what() << '\n';
    return thinwire::exit_code::config;
  }

  const CLI::App* sub = app.get_subcommands().front();
  try {
    const auto config = build_config(thinwire::mode_from_string(sub->get_name()), o);
    return thinwire::execute(config, std::cout, std::cerr);
  } catch (const thinwire::ConfigError& e) {
    std::cerr << "thinwire: config error: " << e.what() << '\n';
    return thinwire::exit_code::config;
  } catch (const thinwire::IoError& e) {
    std::cerr << "thinwire: I/O error: " << e.what() << '\n';
    return thinwire::exit_code::io;
  }
}
