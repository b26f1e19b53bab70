#include "paramp/modes.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace paramp {

std::string ModeIndex::label() const {
  std::ostringstream os;
  os << '(' << p << ',' << l;
  if (l > 0) os << ',' << (azimuth == Azimuth::Cosine ? "cos" : "sin");
  os << ')';
  return os.str();
}

void validate(const ModeIndex& idx) {
  if (idx.p < 0 || idx.l < 0) {
    throw Error(ErrorCode::InvalidModeIndex, "mode indices must be >= 0: " + idx.label());
  }
  if (idx.l == 0 && idx.azimuth == Azimuth::Sine) {
    throw Error(ErrorCode::InvalidModeIndex, "l = 0 has no sine member");
  }
}

double mode_radius(const ModeIndex& idx, double waist) {
  return waist * std::sqrt(2.0 * idx.p + idx.l + 1.0);
}

namespace {

void require_fits(const ModeIndex& idx, double waist, const TransverseGrid& grid) {
  const double reach = mode_radius(idx, waist);
  if (reach > kModeExtentFraction * grid.extent()) {
    std::ostringstream os;
    os << "mode " << idx.label() << " reaches " << reach << " m, beyond "
       << kModeExtentFraction << " x grid half-width " << grid.extent() << " m";
    throw Error(ErrorCode::GridTooSmallForMode, os.str());
  }
}

std::vector<double> sample_mode(const ModeIndex& idx, double waist, const TransverseGrid& grid) {
  const int p = idx.p;
  const int l = idx.l;
  double norm = std::sqrt(2.0 / kPi * std::exp(std::lgamma(p + 1.0) - std::lgamma(p + l + 1.0))) /
                waist;
  if (l > 0) norm *= std::sqrt(2.0);
  const double radial_scale = std::pow(std::sqrt(2.0) / waist, l);
  const double w2 = waist * waist;

  std::vector<double> out(grid.size());
  for (std::size_t iy = 0; iy < grid.n(); ++iy) {
    const double y = grid.coord(iy);
    for (std::size_t ix = 0; ix < grid.n(); ++ix) {
      const double x = grid.coord(ix);
      // rho^l {cos, sin}(l phi) = {Re, Im} (x + iy)^l; products of negated
      // operands are exact, so the (-1)^l parity holds bit for bit.
      std::complex<double> z = 1.0;
      for (int k = 0; k < l; ++k) z *= std::complex<double>(x, y);
      const double angular = idx.azimuth == Azimuth::Cosine ? z.real() : z.imag();
      const double r2 = x * x + y * y;
      out[grid.index(ix, iy)] = norm * radial_scale * angular *
                                std::assoc_laguerre(static_cast<unsigned>(p),
                                                    static_cast<unsigned>(l), 2.0 * r2 / w2) *
                                std::exp(-r2 / w2);
    }
  }
  return out;
}

double inner(const RealField& a, const RealField& b) {
  double sum = 0.0;
  for (std::size_t k = 0; k < a.grid().size(); ++k) sum += a[k] * b[k];
  return sum * a.grid().cell_area();
}

}  // namespace

ComplexField mode_function(const ModeIndex& idx, double waist, const TransverseGrid& grid) {
  validate(idx);
  if (!(waist > 0.0)) throw Error(ErrorCode::NonPositiveParameter, "waist must be positive");
  require_fits(idx, waist, grid);
  return to_complex(RealField(grid, sample_mode(idx, waist, grid)));
}

ModeBasis::ModeBasis(double waist, int pmax, int lmax, const TransverseGrid& grid)
    : waist_(waist), pmax_(pmax), lmax_(lmax), grid_(grid) {
  if (!(waist > 0.0)) throw Error(ErrorCode::NonPositiveParameter, "waist must be positive");
  if (pmax < 0 || lmax < 0) {
    throw Error(ErrorCode::InvalidModeIndex, "mode cutoffs must be >= 0");
  }
  for (int l = 0; l <= lmax; ++l) {
    for (int p = 0; p <= pmax; ++p) {
      indices_.push_back({p, l, Azimuth::Cosine});
      if (l > 0) indices_.push_back({p, l, Azimuth::Sine});
    }
  }
  std::sort(indices_.begin(), indices_.end());
  modes_.reserve(indices_.size());
  for (const auto& idx : indices_) {
    require_fits(idx, waist, grid);
    modes_.emplace_back(grid, sample_mode(idx, waist, grid));
  }
}

std::size_t ModeBasis::find(const ModeIndex& idx) const {
  const auto it = std::lower_bound(indices_.begin(), indices_.end(), idx);
  if (it == indices_.end() || *it != idx) return indices_.size();
  return static_cast<std::size_t>(it - indices_.begin());
}

std::vector<double> ModeBasis::gram() const {
  const std::size_t m = size();
  std::vector<double> g(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) {
      g[i * m + j] = g[j * m + i] = inner(modes_[i], modes_[j]);
    }
  }
  return g;
}

GramDiagnostics gram_diagnostics(const ModeBasis& basis) {
  const auto g = basis.gram();
  const std::size_t m = basis.size();
  GramDiagnostics d;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double v = g[i * m + j];
      if (i == j) {
        d.max_norm_error = std::max(d.max_norm_error, std::abs(v - 1.0));
      } else {
        d.max_off_diagonal = std::max(d.max_off_diagonal, std::abs(v));
      }
    }
  }
  d.max_deviation = std::max(d.max_norm_error, d.max_off_diagonal);
  return d;
}

ComplexField reconstruct(const ModeExpansion& expansion, const ModeBasis& basis) {
  const auto& grid = basis.grid();
  std::vector<std::complex<double>> out(grid.size());
  for (std::size_t m = 0; m < expansion.indices.size(); ++m) {
    const std::size_t pos = basis.find(expansion.indices[m]);
    if (pos == basis.size()) {
      throw Error(ErrorCode::InvalidModeIndex,
                  "mode " + expansion.indices[m].label() + " is not in the basis");
    }
    const auto& mode = basis.mode(pos);
    const auto c = expansion.coefficients[m];
    for (std::size_t k = 0; k < grid.size(); ++k) out[k] += c * mode[k];
  }
  return ComplexField(grid, std::move(out));
}

ModeExpansion decompose(const ComplexField& field, const ModeBasis& basis) {
  require_same_grid(field.grid(), basis.grid(), "decompose");
  const auto& grid = basis.grid();
  ModeExpansion out;
  out.indices = basis.indices();
  out.coefficients.reserve(basis.size());
  for (std::size_t m = 0; m < basis.size(); ++m) {
    const auto& mode = basis.mode(m);
    std::complex<double> c = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) c += mode[k] * field[k];
    out.coefficients.push_back(c * grid.cell_area());
  }
  const double norm = l2_norm(field);
  out.residual = norm == 0.0 ? 0.0 : relative_l2_difference(reconstruct(out, basis), field);
  return out;
}

std::pair<ModeExpansion, ModeExpansion> split_even_odd(const ModeExpansion& expansion) {
  ModeExpansion even;
  ModeExpansion odd;
  even.residual = odd.residual = expansion.residual;
  for (std::size_t m = 0; m < expansion.indices.size(); ++m) {
    auto& part = expansion.indices[m].even() ? even : odd;
    part.indices.push_back(expansion.indices[m]);
    part.coefficients.push_back(expansion.coefficients[m]);
  }
  return {std::move(even), std::move(odd)};
}

ModeExpansion amplify_even_modes(const ModeExpansion& expansion, const TransferPair& pair) {
  auto [even, odd] = split_even_odd(expansion);
  for (auto& c : even.coefficients) c = pair.u * c + pair.v * std::conj(c);
  return even;
}

}  // namespace paramp
