#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "paramp/error.hpp"

namespace paramp {

// Square, uniform sampling of the transverse plane. Sample j sits at
// x_j = (j - n/2) * spacing, so the origin is a sample and the grid covers
// [-L, L). Point reflection maps index j to (n - j) mod n; the edge line at
// -L has no partner inside the window and is treated as its own mirror.
class TransverseGrid {
 public:
  TransverseGrid(std::size_t n, double extent);

  std::size_t n() const noexcept { return n_; }
  double extent() const noexcept { return extent_; }
  double spacing() const noexcept { return 2.0 * extent_ / static_cast<double>(n_); }
  std::size_t size() const noexcept { return n_ * n_; }
  double cell_area() const noexcept { return spacing() * spacing(); }

  double coord(std::size_t j) const noexcept {
    return (static_cast<double>(j) - static_cast<double>(n_ / 2)) * spacing();
  }
  std::size_t reflect(std::size_t j) const noexcept { return (n_ - j) % n_; }
  // Row-major, row index is y.
  std::size_t index(std::size_t ix, std::size_t iy) const noexcept { return iy * n_ + ix; }
  std::size_t reflect_index(std::size_t k) const noexcept {
    return index(reflect(k % n_), reflect(k / n_));
  }
  double radius(std::size_t ix, std::size_t iy) const noexcept {
    return std::hypot(coord(ix), coord(iy));
  }
  std::size_t origin() const noexcept { return n_ / 2; }

  bool operator==(const TransverseGrid&) const = default;

 private:
  std::size_t n_;
  double extent_;
};

namespace detail {
inline bool is_finite(double v) { return std::isfinite(v); }
inline bool is_finite(std::complex<double> v) {
  return std::isfinite(v.real()) && std::isfinite(v.imag());
}
}  // namespace detail

// Sampled field over a TransverseGrid. Entries are finite; the value is
// immutable once built.
template <typename T>
class Field {
 public:
  using value_type = T;

  Field(TransverseGrid grid, std::vector<T> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
      throw Error(ErrorCode::GridMismatch,
                  "field has " + std::to_string(values_.size()) + " samples, grid needs " +
                      std::to_string(grid_.size()));
    }
    for (const auto& v : values_) {
      if (!detail::is_finite(v)) {
        throw Error(ErrorCode::NonFiniteField, "field contains a non-finite sample");
      }
    }
  }

  static Field constant(TransverseGrid grid, T value) {
    return Field(grid, std::vector<T>(grid.size(), value));
  }

  template <typename Fn>
  static Field from_function(TransverseGrid grid, Fn&& fn) {
    std::vector<T> values(grid.size());
    for (std::size_t iy = 0; iy < grid.n(); ++iy) {
      for (std::size_t ix = 0; ix < grid.n(); ++ix) {
        values[grid.index(ix, iy)] = static_cast<T>(fn(grid.coord(ix), grid.coord(iy)));
      }
    }
    return Field(grid, std::move(values));
  }

  const TransverseGrid& grid() const noexcept { return grid_; }
  std::span<const T> values() const noexcept { return values_; }
  const T& operator[](std::size_t k) const noexcept { return values_[k]; }
  const T& at(std::size_t ix, std::size_t iy) const { return values_.at(grid_.index(ix, iy)); }

  // Field evaluated at -rho.
  Field reflected() const {
    std::vector<T> out(values_.size());
    for (std::size_t k = 0; k < values_.size(); ++k) out[k] = values_[grid_.reflect_index(k)];
    return Field(grid_, std::move(out));
  }

  template <typename Fn>
  auto map(Fn&& fn) const {
    using U = std::decay_t<decltype(fn(values_[0]))>;
    std::vector<U> out(values_.size());
    for (std::size_t k = 0; k < values_.size(); ++k) out[k] = fn(values_[k]);
    return Field<U>(grid_, std::move(out));
  }

 private:
  TransverseGrid grid_;
  std::vector<T> values_;
};

using ComplexField = Field<std::complex<double>>;
using RealField = Field<double>;

ComplexField to_complex(const RealField& f);
RealField real_part(const ComplexField& f);
RealField magnitude(const ComplexField& f);
RealField phase(const ComplexField& f);

// Discrete L2 norm sqrt(sum |f|^2 * h^2).
double l2_norm(const ComplexField& f);
double l2_norm(const RealField& f);
// ||a - b|| / ||b||; grids must match.
double relative_l2_difference(const ComplexField& a, const ComplexField& b);
double max_abs_difference(const ComplexField& a, const ComplexField& b);
bool is_real(const ComplexField& f, double tol = 0.0);

void require_same_grid(const TransverseGrid& a, const TransverseGrid& b, const char* what);

}  // namespace paramp
