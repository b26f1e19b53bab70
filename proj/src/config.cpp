#include "paramp/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "paramp/field_io.hpp"

namespace paramp {
namespace {

[[noreturn]] void config_error(const std::string& message) {
  throw Error(ErrorCode::InvalidConfig, message);
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Drops a trailing # comment that is not inside a string.
std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (c == '\\' && quoted) {
      ++i;
    } else if (c == '"') {
      quoted = !quoted;
    } else if (c == '#' && !quoted) {
      return line.substr(0, i);
    }
  }
  return line;
}

std::string parse_string(std::string_view token, const std::string& where) {
  if (token.size() < 2 || token.front() != '"' || token.back() != '"') {
    config_error(where + ": expected a quoted string");
  }
  std::string out;
  for (std::size_t i = 1; i + 1 < token.size(); ++i) {
    char c = token[i];
    if (c == '\\') {
      if (i + 2 >= token.size()) config_error(where + ": dangling escape");
      c = token[++i];
      switch (c) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        default: config_error(where + ": unsupported escape");
      }
    } else {
      out += c;
    }
  }
  return out;
}

ConfigValue parse_value(const std::string& token, const std::string& where) {
  if (token.empty()) config_error(where + ": missing value");
  if (token == "true") return true;
  if (token == "false") return false;
  if (token.front() == '"') return parse_string(token, where);
  if (token.front() == '[') {
    if (token.back() != ']') config_error(where + ": unterminated array");
    std::vector<std::string> items;
    const std::string body = trim(std::string_view(token).substr(1, token.size() - 2));
    std::size_t pos = 0;
    while (pos < body.size()) {
      std::size_t end = pos;
      bool quoted = false;
      while (end < body.size() && (quoted || body[end] != ',')) {
        if (body[end] == '"') quoted = !quoted;
        ++end;
      }
      const std::string item = trim(std::string_view(body).substr(pos, end - pos));
      if (!item.empty()) items.push_back(parse_string(item, where));
      pos = end + 1;
    }
    return items;
  }

  std::string digits;
  for (char c : token) {
    if (c != '_') digits += c;
  }
  const char* first = digits.data();
  const char* last = digits.data() + digits.size();
  if (*first == '+') ++first;
  const bool integral = digits.find_first_of(".eEinfa") == std::string::npos;
  if (integral) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec == std::errc() && ptr == last) return v;
  }
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) config_error(where + ": cannot parse value '" + token + "'");
  return v;
}

std::string key_name(const std::string& section, const std::string& key) {
  return section.empty() ? key : section + "." + key;
}

}  // namespace

ConfigDocument ConfigDocument::parse(const std::string& text) {
  ConfigDocument doc;
  std::istringstream is(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(is, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    if (line.front() == '[') {
      if (line.back() != ']') config_error(where + ": malformed section header");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (section.empty()) config_error(where + ": empty section name");
      doc.sections_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) config_error(where + ": expected key = value");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    if (key.empty()) config_error(where + ": empty key");
    const std::string name = key_name(section, key);
    auto& table = doc.sections_[section];
    if (table.count(key)) config_error(where + ": duplicate key " + name);
    table.emplace(key, parse_value(trim(std::string_view(line).substr(eq + 1)), name));
  }
  return doc;
}

ConfigDocument ConfigDocument::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

const ConfigValue* ConfigDocument::find(const std::string& section, const std::string& key) const {
  const auto s = sections_.find(section);
  if (s == sections_.end()) return nullptr;
  const auto k = s->second.find(key);
  return k == s->second.end() ? nullptr : &k->second;
}

const ConfigValue& ConfigDocument::require(const std::string& section,
                                           const std::string& key) const {
  const auto* v = find(section, key);
  if (!v) config_error(key_name(section, key) + ": missing");
  return *v;
}

bool ConfigDocument::has(const std::string& section, const std::string& key) const {
  return find(section, key) != nullptr;
}

double ConfigDocument::number(const std::string& section, const std::string& key) const {
  const auto& v = require(section, key);
  if (const auto* d = std::get_if<double>(&v)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  config_error(key_name(section, key) + ": expected a number");
}

double ConfigDocument::number_or(const std::string& section, const std::string& key,
                                 double fallback) const {
  return has(section, key) ? number(section, key) : fallback;
}

std::int64_t ConfigDocument::integer_or(const std::string& section, const std::string& key,
                                        std::int64_t fallback) const {
  const auto* v = find(section, key);
  if (!v) return fallback;
  if (const auto* i = std::get_if<std::int64_t>(v)) return *i;
  config_error(key_name(section, key) + ": expected an integer");
}

std::string ConfigDocument::string(const std::string& section, const std::string& key) const {
  const auto& v = require(section, key);
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  config_error(key_name(section, key) + ": expected a string");
}

std::string ConfigDocument::string_or(const std::string& section, const std::string& key,
                                      const std::string& fallback) const {
  return has(section, key) ? string(section, key) : fallback;
}

std::vector<std::string> ConfigDocument::strings_or(const std::string& section,
                                                    const std::string& key,
                                                    std::vector<std::string> fallback) const {
  const auto* v = find(section, key);
  if (!v) return fallback;
  if (const auto* a = std::get_if<std::vector<std::string>>(v)) return *a;
  if (const auto* s = std::get_if<std::string>(v)) return {*s};
  config_error(key_name(section, key) + ": expected an array of strings");
}

namespace {

// Runs fn, prefixing any library error with the config key it came from.
template <typename Fn>
auto keyed(const std::string& key, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.code(), key + ": " + e.what());
  }
}

PupilSpec parse_pupil(const ConfigDocument& doc) {
  const auto shape = doc.string_or("optics", "pupil", "infinite");
  if (shape == "infinite") return PupilSpec::infinite();
  const double size = doc.number("optics", "pupil_size");
  return keyed("optics.pupil_size", [&] {
    if (shape == "square") return PupilSpec::square(size);
    if (shape == "circular") return PupilSpec::circular(size);
    config_error("pupil must be infinite, square or circular (got " + shape + ")");
  });
}

ObjectKind parse_object_kind(const std::string& kind) {
  if (kind == "uniform") return ObjectKind::Uniform;
  if (kind == "gaussian") return ObjectKind::Gaussian;
  if (kind == "two-gaussian") return ObjectKind::TwoGaussian;
  if (kind == "file") return ObjectKind::File;
  config_error("object.kind: unknown object kind " + kind);
}

std::size_t non_negative(std::int64_t v, const std::string& key) {
  if (v < 0) config_error(key + ": must be >= 0");
  return static_cast<std::size_t>(v);
}

}  // namespace

Scenario scenario_from_document(const ConfigDocument& doc, const std::filesystem::path& base_dir) {
  const auto geometry =
      keyed("cavity.geometry", [&] { return parse_geometry(doc.string_or("cavity", "geometry", "confocal")); });
  const CavityParams cavity = keyed("cavity", [&] {
    return CavityParams(doc.number("cavity", "gamma"), doc.number_or("cavity", "detuning", 0.0),
                        doc.number("cavity", "pump"), geometry);
  });
  const OpticalTrain train = keyed("optics", [&] {
    return derive_scales(cavity, doc.number("optics", "wavelength"), doc.number("optics", "focal"),
                         parse_pupil(doc));
  });
  const DetectorParams detector = keyed("detector", [&] {
    return DetectorParams(doc.number_or("detector", "eta", 1.0),
                          doc.number("detector", "pixel_area"), doc.number("detector", "window"));
  });
  const TransverseGrid grid = keyed("grid", [&] {
    const auto n = non_negative(doc.integer_or("grid", "n", 64), "grid.n");
    const double extent = doc.has("grid", "extent_rho0")
                              ? doc.number("grid", "extent_rho0") * train.rho0()
                              : doc.number("grid", "extent");
    return TransverseGrid(n, extent);
  });

  Scenario sc{cavity, train, detector, grid, {}, {}, kDefaultValidityThreshold, 1, 1000, {}, "."};
  sc.object.kind = parse_object_kind(doc.string_or("object", "kind", "gaussian"));
  if (sc.object.kind == ObjectKind::File) {
    std::filesystem::path p = doc.string("object", "path");
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    if (!std::filesystem::exists(p)) config_error("object.path: file not found: " + p.string());
    sc.object.path = p;
  } else {
    sc.object.amplitude = doc.number("object", "amplitude");
    if (!(sc.object.amplitude >= 0.0)) config_error("object.amplitude: must be >= 0");
    if (sc.object.kind != ObjectKind::Uniform) {
      sc.object.width = doc.number("object", "width");
      if (!(sc.object.width > 0.0)) config_error("object.width: must be positive");
    }
    if (sc.object.kind == ObjectKind::TwoGaussian) sc.object.offset = doc.number("object", "offset");
  }

  sc.modes.pmax = static_cast<int>(non_negative(doc.integer_or("modes", "pmax", 2), "modes.pmax"));
  sc.modes.lmax = static_cast<int>(non_negative(doc.integer_or("modes", "lmax", 2), "modes.lmax"));
  if (doc.has("modes", "waist")) {
    sc.modes.waist = doc.number("modes", "waist");
    if (!(*sc.modes.waist > 0.0)) config_error("modes.waist: must be positive");
  }

  sc.validity_threshold = doc.number_or("validity", "threshold", kDefaultValidityThreshold);
  sc.seed = static_cast<std::uint64_t>(non_negative(doc.integer_or("simulate", "seed", 1), "simulate.seed"));
  sc.shots = non_negative(doc.integer_or("simulate", "shots", 1000), "simulate.shots");
  if (sc.shots < 1) config_error("simulate.shots: must be >= 1");
  sc.emit = doc.strings_or("output", "emit", {});
  sc.out_dir = doc.string_or("output", "out_dir", ".");
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  return scenario_from_document(ConfigDocument::load(path), path.parent_path());
}

RealField make_object(const Scenario& sc) {
  const auto& o = sc.object;
  switch (o.kind) {
    case ObjectKind::Uniform:
      return RealField::constant(sc.grid, o.amplitude);
    case ObjectKind::Gaussian: {
      const double w2 = o.width * o.width;
      return RealField::from_function(sc.grid, [&](double x, double y) {
        return o.amplitude * std::exp(-(x * x + y * y) / w2);
      });
    }
    case ObjectKind::TwoGaussian: {
      const double w2 = o.width * o.width;
      return RealField::from_function(sc.grid, [&](double x, double y) {
        const double a = (x - o.offset) * (x - o.offset) + y * y;
        const double b = (x + o.offset) * (x + o.offset) + y * y;
        return o.amplitude * (std::exp(-a / w2) + std::exp(-b / w2));
      });
    }
    case ObjectKind::File: {
      auto loaded = read_csv(o.path);
      if (!(loaded.field.grid() == sc.grid)) {
        throw Error(ErrorCode::GridMismatch,
                    "object.path: field grid does not match [grid] (n/extent differ)");
      }
      return std::move(loaded.field);
    }
  }
  return RealField::constant(sc.grid, 0.0);
}

}  // namespace paramp
