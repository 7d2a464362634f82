#include "thinwire/result_bundle.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include "json.hpp"
#include "thinwire/errors.hpp"

namespace thinwire {
namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void malformed(const std::string& what) {
  throw std::invalid_argument("parse: " + what);
}

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '\\') {
      out += "\\\\";
    } else if (c == '\n') {
      out += "\\n";
    } else {
      out += c;
    }
  }
  return out;
}

std::string unescape(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && i + 1 < s.size()) {
      ++i;
      out += s[i] == 'n' ? '\n' : s[i];
    } else {
      out += s[i];
    }
  }
  return out;
}

double parse_double(std::string_view s) {
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size()) {
    malformed("not a number: '" + std::string(s) + "'");
  }
  return v;
}

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  if (s.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const std::size_t at = s.find(sep, start);
    out.emplace_back(s.substr(start, at - start));
    if (at == std::string_view::npos) break;
    start = at + 1;
  }
  return out;
}

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : escape(s)) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string csv_cell(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) return format_double(*d);
  return quote(std::get<std::string>(cell));
}

// Splits one CSV record; quoted fields become strings, bare fields numbers.
std::vector<Cell> parse_record(std::string_view line) {
  std::vector<Cell> cells;
  std::size_t i = 0;
  while (true) {
    if (i < line.size() && line[i] == '"') {
      std::string raw;
      ++i;
      while (true) {
        if (i >= line.size()) malformed("unterminated quoted field");
        if (line[i] == '"') {
          if (i + 1 < line.size() && line[i + 1] == '"') {
            raw += '"';
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        raw += line[i++];
      }
      cells.emplace_back(unescape(raw));
    } else {
      const std::size_t end = std::min(line.find(',', i), line.size());
      cells.emplace_back(parse_double(line.substr(i, end - i)));
      i = end;
    }
    if (i == line.size()) break;
    if (line[i] != ',') malformed("expected ',' after field");
    ++i;
  }
  return cells;
}

std::string numbers(const std::vector<double>& v) {
  std::vector<std::string> parts;
  for (double x : v) parts.push_back(format_double(x));
  return join(parts, ';');
}

std::string grid_header(const Grid& g) {
  std::vector<std::string> cols;
  for (const auto& axis : g.axes) cols.push_back(axis + "[" + g.axis_unit + "]");
  for (const auto& c : g.components) {
    cols.push_back(c + "_re");
    cols.push_back(c + "_im");
  }
  return join(cols, ',');
}

void check_grid(const Grid& g) {
  if (g.origin.size() != g.axes.size() || g.spacing.size() != g.axes.size() ||
      g.shape.size() != g.axes.size() || g.values.size() != g.components.size()) {
    throw std::invalid_argument("grid '" + g.name + "': inconsistent axis or component counts");
  }
  for (const auto& v : g.values) {
    if (v.size() != g.point_count()) {
      throw std::invalid_argument("grid '" + g.name + "': value count does not match shape");
    }
  }
}

std::string to_csv(const ResultBundle& b) {
  std::ostringstream os;
  os << "# thinwire result bundle\n";
  for (const auto& [k, v] : b.metadata) os << "# meta " << escape(k) << '=' << escape(v) << '\n';
  for (const auto& [k, v] : b.timings)
    os << "# timing " << escape(k) << '=' << format_double(v) << '\n';
  for (const auto& t : b.tables) {
    os << "\n# table " << escape(t.name) << '\n';
    std::vector<std::string> header;
    for (const auto& c : t.columns) header.push_back(quote(c));
    os << join(header, ',') << '\n';
    for (const auto& row : t.rows) {
      std::vector<std::string> cells;
      for (const auto& c : row) cells.push_back(csv_cell(c));
      os << join(cells, ',') << '\n';
    }
  }
  for (const auto& g : b.grids) {
    check_grid(g);
    std::vector<std::string> shape;
    for (int n : g.shape) shape.push_back(std::to_string(n));
    os << "\n# grid " << escape(g.name) << " axes=" << join(g.axes, ';') << " unit=" << g.axis_unit
       << " origin=" << numbers(g.origin) << " spacing=" << numbers(g.spacing)
       << " shape=" << join(shape, ';') << " components=" << join(g.components, ';') << '\n';
    os << grid_header(g) << '\n';
    const std::size_t count = g.point_count();
    for (std::size_t p = 0; p < count; ++p) {
      std::vector<std::string> cells;
      for (std::size_t axis = 0; axis < g.axes.size(); ++axis) {
        cells.push_back(format_double(g.coordinate(p, axis)));
      }
      for (const auto& comp : g.values) {
        cells.push_back(format_double(comp[p].real()));
        cells.push_back(format_double(comp[p].imag()));
      }
      os << join(cells, ',') << '\n';
    }
  }
  return os.str();
}

std::pair<std::string, std::string> key_value(std::string_view s) {
  const std::size_t eq = s.find('=');
  if (eq == std::string_view::npos) malformed("expected key=value in '" + std::string(s) + "'");
  return {unescape(s.substr(0, eq)), unescape(s.substr(eq + 1))};
}

std::vector<double> parse_numbers(const std::string& s) {
  std::vector<double> out;
  for (const auto& part : split(s, ';')) out.push_back(parse_double(part));
  return out;
}

Grid parse_grid_directive(std::string_view rest) {
  Grid g;
  const auto words = split(rest, ' ');
  if (words.empty()) malformed("grid directive without a name");
  g.name = unescape(words[0]);
  for (std::size_t i = 1; i < words.size(); ++i) {
    const auto [key, value] = key_value(words[i]);
    if (key == "axes") {
      g.axes = split(value, ';');
    } else if (key == "unit") {
      g.axis_unit = value;
    } else if (key == "origin") {
      g.origin = parse_numbers(value);
    } else if (key == "spacing") {
      g.spacing = parse_numbers(value);
    } else if (key == "shape") {
      for (const auto& part : split(value, ';')) g.shape.push_back(std::stoi(part));
    } else if (key == "components") {
      g.components = split(value, ';');
    } else {
      malformed("unknown grid attribute '" + key + "'");
    }
  }
  g.values.assign(g.components.size(), {});
  return g;
}

ResultBundle from_csv(std::string_view text) {
  ResultBundle b;
  enum class Section { none, table_header, table, grid_header, grid } section = Section::none;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(start, end - start);
    start = end + 1;

    if (line.empty()) {
      section = Section::none;
      continue;
    }
    if (line.starts_with("# ")) {
      const std::string_view body = line.substr(2);
      if (body.starts_with("meta ")) {
        b.metadata.push_back(key_value(body.substr(5)));
      } else if (body.starts_with("timing ")) {
        auto [k, v] = key_value(body.substr(7));
        b.timings.emplace_back(k, parse_double(v));
      } else if (body.starts_with("table ")) {
        b.tables.push_back({unescape(body.substr(6)), {}, {}});
        section = Section::table_header;
      } else if (body.starts_with("grid ")) {
        b.grids.push_back(parse_grid_directive(body.substr(5)));
        section = Section::grid_header;
      }
      continue;
    }
    switch (section) {
      case Section::table_header:
        for (auto& c : parse_record(line)) {
          if (!std::holds_alternative<std::string>(c))
            malformed("table column names must be quoted");
          b.tables.back().columns.push_back(std::get<std::string>(c));
        }
        section = Section::table;
        break;
      case Section::table:
        b.tables.back().rows.push_back(parse_record(line));
        if (b.tables.back().rows.back().size() != b.tables.back().columns.size()) {
          malformed("row width differs from header in table '" + b.tables.back().name + "'");
        }
        break;
      case Section::grid_header:
        if (line != grid_header(b.grids.back())) {
          malformed("unexpected header for grid '" + b.grids.back().name + "'");
        }
        section = Section::grid;
        break;
      case Section::grid: {
        Grid& g = b.grids.back();
        const auto cells = parse_record(line);
        if (cells.size() != g.axes.size() + 2 * g.components.size()) {
          malformed("row width differs from header in grid '" + g.name + "'");
        }
        for (std::size_t c = 0; c < g.components.size(); ++c) {
          const std::size_t at = g.axes.size() + 2 * c;
          g.values[c].emplace_back(std::get<double>(cells[at]), std::get<double>(cells[at + 1]));
        }
        break;
      }
      case Section::none:
        malformed("data line outside a table or grid");
    }
  }
  for (const auto& g : b.grids) {
    for (const auto& v : g.values) {
      if (v.size() != g.point_count()) malformed("grid '" + g.name + "' has missing rows");
    }
  }
  return b;
}

Json json_number(double v) {
  if (std::isfinite(v)) return v;
  return Json{{"float", format_double(v)}};
}

double number_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_object() && j.contains("float")) return parse_double(j.at("float").get<std::string>());
  malformed("expected a number");
}

Json number_array(const std::vector<double>& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(json_number(x));
  return out;
}

std::vector<double> numbers_from_json(const Json& j) {
  std::vector<double> out;
  for (const auto& x : j) out.push_back(number_from_json(x));
  return out;
}

std::string to_json(const ResultBundle& b) {
  Json root;
  root["metadata"] = Json::object();
  for (const auto& [k, v] : b.metadata) root["metadata"][k] = v;
  root["timings"] = Json::object();
  for (const auto& [k, v] : b.timings) root["timings"][k] = json_number(v);
  root["tables"] = Json::array();
  for (const auto& t : b.tables) {
    Json rows = Json::array();
    for (const auto& row : t.rows) {
      Json r = Json::array();
      for (const auto& c : row) {
        if (const auto* d = std::get_if<double>(&c)) {
          r.push_back(json_number(*d));
        } else {
          r.push_back(std::get<std::string>(c));
        }
      }
      rows.push_back(std::move(r));
    }
    root["tables"].push_back({{"name", t.name}, {"columns", t.columns}, {"rows", std::move(rows)}});
  }
  root["grids"] = Json::array();
  for (const auto& g : b.grids) {
    check_grid(g);
    Json comps = Json::array();
    for (std::size_t c = 0; c < g.components.size(); ++c) {
      std::vector<double> re, im;
      for (const auto& z : g.values[c]) {
        re.push_back(z.real());
        im.push_back(z.imag());
      }
      comps.push_back(
          {{"name", g.components[c]}, {"re", number_array(re)}, {"im", number_array(im)}});
    }
    root["grids"].push_back({{"name", g.name},
                             {"axes", g.axes},
                             {"unit", g.axis_unit},
                             {"origin", number_array(g.origin)},
                             {"spacing", number_array(g.spacing)},
                             {"shape", g.shape},
                             {"components", std::move(comps)}});
  }
  return root.dump(2) + "\n";
}

ResultBundle from_json(std::string_view text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::exception& e) {
    malformed(e.what());
  }
  ResultBundle b;
  try {
    for (const auto& [k, v] : root.at("metadata").items())
      b.metadata.emplace_back(k, v.get<std::string>());
    for (const auto& [k, v] : root.at("timings").items())
      b.timings.emplace_back(k, number_from_json(v));
    for (const auto& t : root.at("tables")) {
      Table table{
          t.at("name").get<std::string>(), t.at("columns").get<std::vector<std::string>>(), {}};
      for (const auto& r : t.at("rows")) {
        std::vector<Cell> row;
        for (const auto& c : r) {
          if (c.is_string()) {
            row.emplace_back(c.get<std::string>());
          } else {
            row.emplace_back(number_from_json(c));
          }
        }
        table.rows.push_back(std::move(row));
      }
      b.tables.push_back(std::move(table));
    }
    for (const auto& j : root.at("grids")) {
      Grid g;
      g.name = j.at("name").get<std::string>();
      g.axes = j.at("axes").get<std::vector<std::string>>();
      g.axis_unit = j.at("unit").get<std::string>();
      g.origin = numbers_from_json(j.at("origin"));
      g.spacing = numbers_from_json(j.at("spacing"));
      g.shape = j.at("shape").get<std::vector<int>>();
      for (const auto& c : j.at("components")) {
        g.components.push_back(c.at("name").get<std::string>());
        const auto re = numbers_from_json(c.at("re"));
        const auto im = numbers_from_json(c.at("im"));
        if (re.size() != im.size()) malformed("grid '" + g.name + "': re/im length mismatch");
        std::vector<Complex> values(re.size());
        for (std::size_t i = 0; i < re.size(); ++i) values[i] = {re[i], im[i]};
        g.values.push_back(std::move(values));
      }
      b.grids.push_back(std::move(g));
    }
  } catch (const Json::exception& e) {
    malformed(e.what());
  }
  return b;
}

}  // namespace

std::size_t Grid::point_count() const {
  if (shape.empty()) return 0;
  std::size_t n = 1;
  for (int s : shape) n *= std::size_t(std::max(s, 0));
  return n;
}

double Grid::coordinate(std::size_t point, std::size_t axis) const {
  std::size_t stride = 1;
  for (std::size_t a = 0; a < axis; ++a) stride *= std::size_t(shape[a]);
  const std::size_t index = (point / stride) % std::size_t(shape[axis]);
  return origin[axis] + double(index) * spacing[axis];
}

const Table* ResultBundle::table(std::string_view name) const {
  for (const auto& t : tables) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

const Grid* ResultBundle::grid(std::string_view name) const {
  for (const auto& g : grids) {
    if (g.name == name) return &g;
  }
  return nullptr;
}

const std::string* ResultBundle::meta(std::string_view key) const {
  for (const auto& [k, v] : metadata) {
    if (k == key) return &v;
  }
  return nullptr;
}

std::string format_double(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, end);
  if (s.find_first_of(".ein") == std::string::npos) s += ".0";
  return s;
}

std::string serialize(const ResultBundle& bundle, Format format) {
  return format == Format::csv ? to_csv(bundle) : to_json(bundle);
}

ResultBundle parse(std::string_view text, Format format) {
  return format == Format::csv ? from_csv(text) : from_json(text);
}

void write_bundle(const ResultBundle& bundle, const std::string& path, Format format) {
  const std::string payload = serialize(bundle, format);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << payload;
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace thinwire
