#include "paramp/field_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace paramp {

void write_csv(std::ostream& os, const RealField& field, const std::string& quantity) {
  const auto& grid = field.grid();
  os << "# n=" << grid.n() << " extent=" << std::setprecision(17) << grid.extent()
     << " quantity=" << quantity << '\n';
  for (std::size_t iy = 0; iy < grid.n(); ++iy) {
    for (std::size_t ix = 0; ix < grid.n(); ++ix) {
      if (ix) os << ',';
      os << field.at(ix, iy);
    }
    os << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const RealField& field,
               const std::string& quantity) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  write_csv(out, field, quantity);
}

namespace {

std::string header_value(const std::string& header, const std::string& key) {
  const std::string tag = key + "=";
  std::istringstream is(header);
  std::string token;
  while (is >> token) {
    if (token.rfind(tag, 0) == 0) return token.substr(tag.size());
  }
  throw Error(ErrorCode::Io, "CSV header lacks " + key);
}

double to_double(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::Io, "bad number in CSV: '" + s + "'");
  }
  return v;
}

}  // namespace

LoadedField read_csv(std::istream& is) {
  std::string header;
  if (!std::getline(is, header) || header.rfind("#", 0) != 0) {
    throw Error(ErrorCode::Io, "CSV field must start with a '# n=... extent=...' header");
  }
  const auto n = static_cast<std::size_t>(to_double(header_value(header, "n")));
  const TransverseGrid grid(n, to_double(header_value(header, "extent")));
  std::string quantity;
  try {
    quantity = header_value(header, "quantity");
  } catch (const Error&) {
  }

  std::vector<double> values;
  values.reserve(grid.size());
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      const auto end = std::min(line.find(',', pos), line.size());
      std::string cell = line.substr(pos, end - pos);
      cell.erase(std::remove_if(cell.begin(), cell.end(), ::isspace), cell.end());
      values.push_back(to_double(cell));
      pos = end + 1;
    }
  }
  if (values.size() != grid.size()) {
    throw Error(ErrorCode::Io, "CSV holds " + std::to_string(values.size()) + " values, expected " +
                                   std::to_string(grid.size()));
  }
  return {RealField(grid, std::move(values)), quantity};
}

LoadedField read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  return read_csv(in);
}

void write_pgm(std::ostream& os, const RealField& field, const std::string& quantity) {
  const auto& grid = field.grid();
  const auto [lo_it, hi_it] = std::minmax_element(field.values().begin(), field.values().end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  const double span = hi - lo;
  os << "P5\n# quantity=" << quantity << std::setprecision(17) << " min=" << lo << " max=" << hi
     << '\n'
     << grid.n() << ' ' << grid.n() << "\n65535\n";
  for (std::size_t iy = 0; iy < grid.n(); ++iy) {
    for (std::size_t ix = 0; ix < grid.n(); ++ix) {
      const double t = span > 0.0 ? (field.at(ix, iy) - lo) / span : 0.0;
      const auto level = static_cast<std::uint16_t>(std::lround(std::clamp(t, 0.0, 1.0) * 65535.0));
      const char bytes[2] = {static_cast<char>(level >> 8), static_cast<char>(level & 0xff)};
      os.write(bytes, 2);
    }
  }
}

void write_pgm(const std::filesystem::path& path, const RealField& field,
               const std::string& quantity) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  write_pgm(out, field, quantity);
}

}  // namespace paramp
