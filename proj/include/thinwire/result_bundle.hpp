#pragma once

// Run results and their CSV / JSON encodings. Both formats round-trip
// exactly: doubles are written in shortest round-trip form.

#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "thinwire/geometry.hpp"

namespace thinwire {

/// Table cell: a number or a text label. Text is always quoted in CSV.
using Cell = std::variant<double, std::string>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  bool operator==(const Table&) const = default;
};

/// Complex samples on a regular grid. The first axis varies fastest, so a 2-D
/// grid is row-major with index iy * nx + ix.
struct Grid {
  std::string name;
  std::vector<std::string> axes;  ///< e.g. {"x", "y"} or {"x", "y", "z"}
  std::string axis_unit = "length";
  std::vector<double> origin;
  std::vector<double> spacing;
  std::vector<int> shape;
  std::vector<std::string> components;       ///< e.g. {"u"} or {"E1", ..., "H3"}
  std::vector<std::vector<Complex>> values;  ///< values[component][point]

  [[nodiscard]] std::size_t point_count() const;
  /// Coordinate of `point` along axis `axis`.
  [[nodiscard]] double coordinate(std::size_t point, std::size_t axis) const;

  bool operator==(const Grid&) const = default;
};

struct ResultBundle {
  std::vector<std::pair<std::string, std::string>> metadata;  ///< config echo, versions
  std::vector<std::pair<std::string, double>> timings;        ///< seconds, not deterministic
  std::vector<Table> tables;
  std::vector<Grid> grids;

  [[nodiscard]] const Table* table(std::string_view name) const;
  [[nodiscard]] const Grid* grid(std::string_view name) const;
  [[nodiscard]] const std::string* meta(std::string_view key) const;

  bool operator==(const ResultBundle&) const = default;
};

enum class Format { csv, json };

/// Shortest decimal that parses back to exactly `v`, with ".0" appended to
/// integral values (1.0, not 1).
std::string format_double(double v);

std::string serialize(const ResultBundle& bundle, Format format);

/// Inverse of serialize. Throws std::invalid_argument on malformed input.
ResultBundle parse(std::string_view text, Format format);

/// Writes serialize(bundle, format) to `path`; throws IoError on failure.
void write_bundle(const ResultBundle& bundle, const std::string& path, Format format);

}  // namespace thinwire
