#pragma once

#include <optional>
#include <string_view>

namespace paramp {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kDefaultValidityThreshold = 10.0;
// Detection window counted as "long" once T_d * gamma reaches this.
inline constexpr double kLongWindowProduct = 100.0;

enum class Geometry { Planar, Confocal };

std::string_view to_string(Geometry g);
Geometry parse_geometry(std::string_view name);

// Cavity parameters. Detuning and analysis frequencies are in units of the
// decay rate gamma. pump is the parametric coupling A_p; the amplifier is
// only stable below threshold, A_p < 1.
class CavityParams {
 public:
  CavityParams(double gamma, double detuning, double pump, Geometry geometry);

  double gamma() const noexcept { return gamma_; }
  double detuning() const noexcept { return detuning_; }
  double pump() const noexcept { return pump_; }
  Geometry geometry() const noexcept { return geometry_; }

  CavityParams with_geometry(Geometry g) const {
    return CavityParams(gamma_, detuning_, pump_, g);
  }

 private:
  double gamma_;
  double detuning_;
  double pump_;
  Geometry geometry_;
};

enum class PupilShape { InfiniteIdeal, Square, Circular };

class PupilSpec {
 public:
  static PupilSpec infinite() { return PupilSpec(PupilShape::InfiniteIdeal, 0.0); }
  static PupilSpec square(double side);
  static PupilSpec circular(double radius);

  PupilShape shape() const noexcept { return shape_; }
  // Side for Square, radius for Circular, 0 for InfiniteIdeal.
  double size() const noexcept { return size_; }
  // Side (square) or diameter (circular); the scale that sets the width of
  // the impulse response.
  double aperture_width() const noexcept;
  // S_p; empty for an infinite pupil.
  std::optional<double> area() const noexcept;
  bool is_infinite() const noexcept { return shape_ == PupilShape::InfiniteIdeal; }

 private:
  PupilSpec(PupilShape shape, double size) : shape_(shape), size_(size) {}

  PupilShape shape_;
  double size_;
};

class OpticalTrain {
 public:
  OpticalTrain(double wavelength, double focal, PupilSpec pupil, double gamma);

  double wavelength() const noexcept { return wavelength_; }
  double focal() const noexcept { return focal_; }
  const PupilSpec& pupil() const noexcept { return pupil_; }
  double wavenumber() const noexcept { return wavenumber_; }
  // rho0 = f * sqrt(lambda * gamma / (pi * c))
  double rho0() const noexcept { return rho0_; }
  // lambda * f, the length^2 scale of the lens Fourier transforms.
  double lambda_f() const noexcept { return wavelength_ * focal_; }

 private:
  double wavelength_;
  double focal_;
  PupilSpec pupil_;
  double wavenumber_;
  double rho0_;
};

double characteristic_length(double wavelength, double focal, double gamma);

OpticalTrain derive_scales(const CavityParams& cavity, double wavelength, double focal,
                           PupilSpec pupil = PupilSpec::infinite());

class DetectorParams {
 public:
  DetectorParams(double eta, double pixel_area, double window);

  double eta() const noexcept { return eta_; }
  double pixel_area() const noexcept { return pixel_area_; }
  double window() const noexcept { return window_; }
  // eta * S_d * T_d
  double exposure() const noexcept { return eta_ * pixel_area_ * window_; }

  bool long_window(double gamma) const noexcept {
    return window_ * gamma >= kLongWindowProduct;
  }

  DetectorParams with_unit_efficiency() const {
    return DetectorParams(1.0, pixel_area_, window_);
  }

 private:
  double eta_;
  double pixel_area_;
  double window_;
};

enum class Verdict { Pass, Fail, Undefined };

std::string_view to_string(Verdict v);

// Left-hand side of the resolution condition that justifies dropping the
// residual noise terms: s^2 (lambda f)^2 / S_p * 2 pi / gamma.
struct ValidityFigure {
  double value = 0.0;
  bool pupil_defined = true;
  double threshold = kDefaultValidityThreshold;

  Verdict verdict() const noexcept;
  bool satisfied() const noexcept { return verdict() == Verdict::Pass; }
};

ValidityFigure validity_figure(double s_peak_sq, const OpticalTrain& train,
                               const CavityParams& cavity,
                               double threshold = kDefaultValidityThreshold);

}  // namespace paramp
