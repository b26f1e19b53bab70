#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "paramp/field.hpp"
#include "paramp/params.hpp"
#include "paramp/transfer.hpp"

namespace paramp {

// Minimum mean count for the Gaussian photocount approximation.
inline constexpr double kGaussianCountFloor = 20.0;

struct PixelStats {
  double mean = 0.0;
  double variance = 0.0;
  std::optional<double> snr;  // empty when the variance vanishes
  double x = 0.0;
  double y = 0.0;
};

// <N_I> = eta S_d T_d s^2 G
double image_pixel_mean(double s, double g, const DetectorParams& det);
// <dN_I^2> = eta S_d T_d s^2 G {1 - eta + eta [cos^2 e^{2R} + sin^2 e^{-2R}]}
double image_pixel_variance(double s, double g, const SqueezeParams& sq,
                            const DetectorParams& det);
// Coherent object: Poisson counts, variance equal to the mean.
PixelStats object_pixel_stats(double s, const DetectorParams& det);

// Real field with a validity mask; masked samples hold 0.
class MaskedField {
 public:
  MaskedField(RealField values, std::vector<bool> valid);

  const RealField& values() const noexcept { return values_; }
  const TransverseGrid& grid() const noexcept { return values_.grid(); }
  bool valid(std::size_t k) const { return valid_.at(k); }
  std::size_t valid_count() const noexcept;
  // Throws MaskedPixel on masked samples.
  double at(std::size_t k) const;
  double min() const;
  double max() const;

 private:
  RealField values_;
  std::vector<bool> valid_;
};

struct DetectionReport {
  DetectorParams detector;
  RealField image_mean;
  RealField image_variance;
  MaskedField image_snr;
  // Object-plane reference: same pixel and window, unit efficiency.
  RealField object_mean;
  RealField object_variance;
  MaskedField object_snr;
  ValidityFigure validity;
  bool long_window = true;

  PixelStats image_pixel(std::size_t ix, std::size_t iy) const;
  PixelStats object_pixel(std::size_t ix, std::size_t iy) const;
};

// Pixel statistics over the grid for object amplitude s(rho).
DetectionReport detect(const RealField& object, const TransferMaps& maps, const DetectorParams& det,
                       const ValidityFigure& validity, double gamma);

// F = R_O / R_I per pixel, masked where the object vanishes.
MaskedField noise_figure_empirical(const DetectionReport& report);

struct MonteCarloResult {
  RealField last_sample;
  RealField mean;
  RealField variance;
  RealField mean_stderr;
  RealField variance_stderr;
  std::size_t shots = 0;
  std::vector<std::string> warnings;
};

// Independent Gaussian photocounts per pixel, clamped at 0 and rounded.
// Pixel k draws from its own stream seeded by (seed, k).
MonteCarloResult monte_carlo_image(const RealField& mean, const RealField& variance,
                                   std::uint64_t seed, std::size_t shots);

}  // namespace paramp
