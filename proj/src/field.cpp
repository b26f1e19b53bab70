#include "paramp/field.hpp"

#include <algorithm>
#include <string>

namespace paramp {

TransverseGrid::TransverseGrid(std::size_t n, double extent) : n_(n), extent_(extent) {
  if (n < 8 || n % 2 != 0) {
    throw Error(ErrorCode::InvalidGrid,
                "grid n must be even and >= 8 (got " + std::to_string(n) + ")");
  }
  if (!(extent > 0.0) || !std::isfinite(extent)) {
    throw Error(ErrorCode::InvalidGrid, "grid extent must be positive");
  }
}

void require_same_grid(const TransverseGrid& a, const TransverseGrid& b, const char* what) {
  if (!(a == b)) {
    throw Error(ErrorCode::GridMismatch, std::string(what) + ": fields live on different grids");
  }
}

ComplexField to_complex(const RealField& f) {
  return f.map([](double v) { return std::complex<double>(v, 0.0); });
}

RealField real_part(const ComplexField& f) {
  return f.map([](std::complex<double> v) { return v.real(); });
}

RealField magnitude(const ComplexField& f) {
  return f.map([](std::complex<double> v) { return std::abs(v); });
}

RealField phase(const ComplexField& f) {
  return f.map([](std::complex<double> v) { return std::arg(v); });
}

double l2_norm(const ComplexField& f) {
  double sum = 0.0;
  for (const auto& v : f.values()) sum += std::norm(v);
  return std::sqrt(sum * f.grid().cell_area());
}

double l2_norm(const RealField& f) {
  double sum = 0.0;
  for (double v : f.values()) sum += v * v;
  return std::sqrt(sum * f.grid().cell_area());
}

double relative_l2_difference(const ComplexField& a, const ComplexField& b) {
  require_same_grid(a.grid(), b.grid(), "relative_l2_difference");
  double diff = 0.0;
  double ref = 0.0;
  for (std::size_t k = 0; k < a.grid().size(); ++k) {
    diff += std::norm(a[k] - b[k]);
    ref += std::norm(b[k]);
  }
  if (ref == 0.0) return diff == 0.0 ? 0.0 : std::sqrt(diff);
  return std::sqrt(diff / ref);
}

double max_abs_difference(const ComplexField& a, const ComplexField& b) {
  require_same_grid(a.grid(), b.grid(), "max_abs_difference");
  double out = 0.0;
  for (std::size_t k = 0; k < a.grid().size(); ++k) out = std::max(out, std::abs(a[k] - b[k]));
  return out;
}

bool is_real(const ComplexField& f, double tol) {
  return std::all_of(f.values().begin(), f.values().end(),
                     [tol](std::complex<double> v) { return std::abs(v.imag()) <= tol; });
}

}  // namespace paramp
