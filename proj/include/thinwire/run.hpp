#pragma once

// Experiment orchestration behind the command-line tool.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "thinwire/geometry.hpp"
#include "thinwire/homogenize.hpp"
#include "thinwire/result_bundle.hpp"

namespace thinwire {

enum class Mode { single, many, homogenize, refraction, validate, fields };

std::string_view to_string(Mode mode);
/// Throws ConfigError for an unknown name.
Mode mode_from_string(std::string_view name);
Format format_from_string(std::string_view name);

struct DensitySpec {
  std::string kind = "constant";  ///< constant | linear_ramp | gaussian_bump
  Rect domain;
  double value = 0.5;
  double left = 0.0;
  double right = 1.0;
  double peak = 1.0;
  Point2 center{0.5, 0.5};
  double width = 0.2;
};

struct RunConfig {
  Mode mode = Mode::single;
  // params
  double kappa = 1.0;
  double k3 = 0.0;
  double epsilon = 1.0;
  double mu = 1.0;
  double n0_sq = 1.0;
  double n_density = 0.0;
  std::optional<double> target_n_sq;
  // geometry
  double a = 1e-3;
  Point2 center{0.0, 0.0};
  std::vector<Point2> centers{{-0.25, 0.1}, {0.25, 0.1}};
  DensitySpec density;
  // grid
  int grid_n = 32;
  int grid_nz = 5;  ///< fields: z samples, same spacing as x
  Rect extent{-1.0, -1.0, 1.0, 1.0};
  std::vector<double> a_ladder;
  std::uint64_t seed = 1;
  // output
  std::string out_path;  ///< empty: standard output
  Format format = Format::csv;
};

/// Reads a JSON config. Unknown keys and wrong types raise ConfigError naming
/// the offending field ("params.kappa: expected a number").
RunConfig config_from_json(const nlohmann::json& j, RunConfig base = {});
/// Throws IoError if the file cannot be read, ConfigError if it is malformed.
RunConfig load_config(const std::string& path, RunConfig base = {});
nlohmann::ordered_json config_to_json(const RunConfig& config);

/// Physical and structural checks; throws ConfigError with a field-level message.
void validate_config(const RunConfig& config);

/// Validates, dispatches to the mode and returns the results. Table and grid
/// payloads depend only on the config (timings aside).
ResultBundle run(const RunConfig& config);

/// True when the bundle records a failed check (mode validate).
bool has_failed_checks(const ResultBundle& bundle);

/// Exit codes of the command-line tool.
namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int config = 2;
inline constexpr int numerical = 3;
inline constexpr int io = 4;
inline constexpr int check_failed = 5;
}  // namespace exit_code

/// Runs, writes the bundle (to config.out_path or `stdout_sink`), reports
/// errors to `diagnostics` and returns the exit code.
int execute(const RunConfig& config, std::ostream& stdout_sink, std::ostream& diagnostics);

}  // namespace thinwire
