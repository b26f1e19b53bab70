#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "paramp/field.hpp"
#include "paramp/params.hpp"
#include "paramp/transfer.hpp"

namespace paramp {

inline constexpr std::size_t kOracleMaxGrid = 64;
// Relative L2 weight above which discarding an odd component is reported.
inline constexpr double kOddWeightTolerance = 1e-12;

// Image-plane impulse response of the pupil,
//   p(rho) = 1/(lambda f) * Int dxi P(xi) exp(-i 2 pi rho.xi / (lambda f)).
// An infinite pupil has p = lambda f * delta(rho); it is kept symbolic and
// never sampled.
class ImpulseResponse {
 public:
  static ImpulseResponse delta(const TransverseGrid& grid);
  ImpulseResponse(ComplexField kernel, PupilSpec pupil);

  bool is_delta() const noexcept { return pupil_.is_infinite(); }
  const ComplexField& kernel() const;
  const PupilSpec& pupil() const noexcept { return pupil_; }
  const TransverseGrid& grid() const noexcept { return grid_; }

 private:
  ImpulseResponse(TransverseGrid grid) : grid_(grid), pupil_(PupilSpec::infinite()) {}

  TransverseGrid grid_;
  std::optional<ComplexField> kernel_;
  PupilSpec pupil_;
};

ImpulseResponse impulse_response(const PupilSpec& pupil, const OpticalTrain& train,
                                 const TransverseGrid& grid);

// Linear convolution Int d rho' k(rho - rho') g(rho') over the grid, with
// the kernel known only inside the window. FFT on a zero-padded 2n grid.
ComplexField convolve(const ComplexField& kernel, const ComplexField& field);

// Same sum evaluated directly, O(n^4). Test oracle for convolve().
ComplexField direct_convolution_oracle(const ComplexField& kernel, const ComplexField& field);

// (1/(lambda f)) * (p conv field); identity for an infinite pupil.
ComplexField apply_pupil(const ImpulseResponse& response, const OpticalTrain& train,
                         const ComplexField& field);

// s_+(rho) = [s(rho) + s(-rho)] / 2
ComplexField even_projection(const ComplexField& field);
// ||s - s_+||^2 / ||s||^2, 0 for the zero field.
double odd_weight(const ComplexField& field);

struct PropagationResult {
  ComplexField image;
  Geometry geometry;
  // Transfer coefficients used per sample (constant fields for confocal).
  ComplexField u;
  ComplexField v;
  ValidityFigure validity;
  // Detection closed forms assume a real object amplitude.
  bool mean_field_exact = true;
  std::optional<double> discarded_odd_weight;
  std::vector<std::string> warnings;
};

PropagationResult amplify_planar(const ComplexField& object, const CavityParams& cavity,
                                 const OpticalTrain& train, double omega = 0.0,
                                 double validity_threshold = kDefaultValidityThreshold);

PropagationResult amplify_confocal(const ComplexField& object, const CavityParams& cavity,
                                   const OpticalTrain& train, double omega = 0.0,
                                   double validity_threshold = kDefaultValidityThreshold);

// Dispatches on cavity.geometry().
PropagationResult amplify(const ComplexField& object, const CavityParams& cavity,
                          const OpticalTrain& train, double omega = 0.0,
                          double validity_threshold = kDefaultValidityThreshold);

}  // namespace paramp
