#pragma once

#include <complex>
#include <optional>

#include "paramp/field.hpp"
#include "paramp/params.hpp"

namespace paramp {

inline constexpr double kDefaultSingularityGuard = 1e-9;

// Local mismatch between the signal and the cavity resonance, in units of
// gamma: Delta - Omega + (rho/rho0)^2 for the planar cavity, Delta_+ - Omega
// for the confocal one.
struct Mismatch {
  double value = 0.0;
  std::optional<double> rho;  // empty for confocal: no position dependence
  double omega = 0.0;
  Geometry geometry = Geometry::Planar;
};

Mismatch mismatch(const CavityParams& cavity, const OpticalTrain& train, double rho, double omega);

// Input-output coefficients of the degenerate parametric cavity,
// e = U a + V a^dagger, evaluated at mismatches delta(+Omega), delta(-Omega).
struct TransferPair {
  std::complex<double> u;
  std::complex<double> v;
  std::complex<double> denominator;
  double delta_plus = 0.0;
  double delta_minus = 0.0;
  double pump = 0.0;
};

TransferPair transfer_pair(double delta_plus, double delta_minus, double pump,
                           double guard = kDefaultSingularityGuard);
TransferPair transfer_pair(const Mismatch& plus, const Mismatch& minus, double pump,
                           double guard = kDefaultSingularityGuard);

// Pair for the cavity at transverse radius rho and frequency omega.
TransferPair local_transfer(const CavityParams& cavity, const OpticalTrain& train, double rho,
                            double omega = 0.0, double guard = kDefaultSingularityGuard);

// Mean-intensity gain |U + V|^2 for a real input amplitude.
double gain(const TransferPair& pair);

// Closed form {[(1+A)^2 - d^2]^2 + 4 d^2} / (1 + d^2 - A^2)^2 at Omega = 0.
double gain_closed_form(double delta, double pump);

struct SqueezeParams {
  double r = 0.0;      // exp(+-R) = |U| +- |V|, R >= 0
  double theta = 0.0;  // in [-pi/2, pi/2]
};

SqueezeParams squeeze(const TransferPair& pair);

// cos^2(theta) e^{2R} + sin^2(theta) e^{-2R}: quadrature noise along the mean
// field, in shot-noise units.
double quadrature_noise(const SqueezeParams& sq);

// F = {1 - eta + eta [cos^2 e^{2R} + sin^2 e^{-2R}]} / (eta G)
double noise_figure(double g, const SqueezeParams& sq, double eta);

// Per-sample gain and squeezing at Omega = 0.
struct TransferMaps {
  RealField gain;
  RealField squeeze_r;
  RealField squeeze_theta;

  SqueezeParams squeeze_at(std::size_t k) const { return {squeeze_r[k], squeeze_theta[k]}; }
};

TransferMaps transfer_maps(const CavityParams& cavity, const OpticalTrain& train,
                           const TransverseGrid& grid, double guard = kDefaultSingularityGuard);
RealField gain_map(const CavityParams& cavity, const OpticalTrain& train,
                   const TransverseGrid& grid);
RealField noise_figure_map(const CavityParams& cavity, const OpticalTrain& train,
                           const TransverseGrid& grid, double eta);
RealField noise_figure_map(const TransferMaps& maps, double eta);

}  // namespace paramp
