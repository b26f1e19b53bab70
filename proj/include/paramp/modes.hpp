#pragma once

#include <compare>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "paramp/field.hpp"
#include "paramp/transfer.hpp"

namespace paramp {

enum class Azimuth { Cosine, Sine };

// Gauss-Laguerre mode label (p, l, i). For l = 0 only the cosine member
// exists.
struct ModeIndex {
  int p = 0;
  int l = 0;
  Azimuth azimuth = Azimuth::Cosine;

  // Modes with the same parity of l share a cavity frequency.
  bool even() const noexcept { return l % 2 == 0; }
  std::string label() const;

  auto operator<=>(const ModeIndex&) const = default;
};

void validate(const ModeIndex& idx);

// Fraction of the window half-width a mode may reach, w sqrt(2p + l + 1).
inline constexpr double kModeExtentFraction = 0.7;

double mode_radius(const ModeIndex& idx, double waist);

// Unit-norm real mode
//   C (sqrt2 rho/w)^l L_p^l(2 rho^2/w^2) exp(-rho^2/w^2) {cos, sin}(l phi).
ComplexField mode_function(const ModeIndex& idx, double waist, const TransverseGrid& grid);

class ModeBasis {
 public:
  // All admissible modes with p <= pmax, l <= lmax.
  ModeBasis(double waist, int pmax, int lmax, const TransverseGrid& grid);

  double waist() const noexcept { return waist_; }
  int pmax() const noexcept { return pmax_; }
  int lmax() const noexcept { return lmax_; }
  const TransverseGrid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return indices_.size(); }
  const std::vector<ModeIndex>& indices() const noexcept { return indices_; }
  const RealField& mode(std::size_t k) const { return modes_.at(k); }
  // Position of idx in indices(), or size() if absent.
  std::size_t find(const ModeIndex& idx) const;

  // Row-major size() x size() matrix of grid inner products.
  std::vector<double> gram() const;

 private:
  double waist_;
  int pmax_;
  int lmax_;
  TransverseGrid grid_;
  std::vector<ModeIndex> indices_;
  std::vector<RealField> modes_;
};

struct GramDiagnostics {
  double max_deviation = 0.0;     // max |G - I|
  double max_off_diagonal = 0.0;  // max |G_ij|, i != j
  double max_norm_error = 0.0;    // max |G_ii - 1|
};

GramDiagnostics gram_diagnostics(const ModeBasis& basis);

struct ModeExpansion {
  std::vector<ModeIndex> indices;
  std::vector<std::complex<double>> coefficients;
  // ||field - reconstruction|| / ||field|| at decomposition time.
  double residual = 0.0;
};

ModeExpansion decompose(const ComplexField& field, const ModeBasis& basis);
ComplexField reconstruct(const ModeExpansion& expansion, const ModeBasis& basis);

// (even-l part, odd-l part)
std::pair<ModeExpansion, ModeExpansion> split_even_odd(const ModeExpansion& expansion);

// Confocal amplification in mode space: even-l coefficients become
// U c + V conj(c); odd-l modes are off resonance and dropped.
ModeExpansion amplify_even_modes(const ModeExpansion& expansion, const TransferPair& pair);

}  // namespace paramp
