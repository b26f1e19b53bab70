#include "paramp/params.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "paramp/error.hpp"

namespace paramp {
namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw Error(ErrorCode::NonPositiveParameter,
                std::string(name) + " must be positive and finite (got " + fmt(v) + ")");
  }
}

}  // namespace

std::string_view to_string(Geometry g) {
  return g == Geometry::Planar ? "planar" : "confocal";
}

Geometry parse_geometry(std::string_view name) {
  if (name == "planar") return Geometry::Planar;
  if (name == "confocal") return Geometry::Confocal;
  throw Error(ErrorCode::InvalidConfig,
              "geometry must be planar or confocal (got " + std::string(name) + ")");
}

CavityParams::CavityParams(double gamma, double detuning, double pump, Geometry geometry)
    : gamma_(gamma), detuning_(detuning), pump_(pump), geometry_(geometry) {
  require_positive(gamma, "gamma");
  if (!std::isfinite(detuning)) {
    throw Error(ErrorCode::NonPositiveParameter, "detuning must be finite");
  }
  if (!(pump >= 0.0) || !std::isfinite(pump)) {
    throw Error(ErrorCode::NonPositiveParameter, "pump must be >= 0 (got " + fmt(pump) + ")");
  }
  if (pump >= 1.0) {
    throw Error(ErrorCode::AboveThreshold, "pump must be < 1 (got " + fmt(pump) + ")");
  }
}

PupilSpec PupilSpec::square(double side) {
  require_positive(side, "pupil side");
  return PupilSpec(PupilShape::Square, side);
}

PupilSpec PupilSpec::circular(double radius) {
  require_positive(radius, "pupil radius");
  return PupilSpec(PupilShape::Circular, radius);
}

double PupilSpec::aperture_width() const noexcept {
  switch (shape_) {
    case PupilShape::Square: return size_;
    case PupilShape::Circular: return 2.0 * size_;
    case PupilShape::InfiniteIdeal: break;
  }
  return std::numeric_limits<double>::infinity();
}

std::optional<double> PupilSpec::area() const noexcept {
  switch (shape_) {
    case PupilShape::Square: return size_ * size_;
    case PupilShape::Circular: return kPi * size_ * size_;
    case PupilShape::InfiniteIdeal: break;
  }
  return std::nullopt;
}

double characteristic_length(double wavelength, double focal, double gamma) {
  return focal * std::sqrt(wavelength * gamma / (kPi * kSpeedOfLight));
}

OpticalTrain::OpticalTrain(double wavelength, double focal, PupilSpec pupil, double gamma)
    : wavelength_(wavelength), focal_(focal), pupil_(pupil) {
  require_positive(wavelength, "wavelength");
  require_positive(focal, "focal");
  require_positive(gamma, "gamma");
  wavenumber_ = 2.0 * kPi / wavelength;
  rho0_ = characteristic_length(wavelength, focal, gamma);
}

OpticalTrain derive_scales(const CavityParams& cavity, double wavelength, double focal,
                           PupilSpec pupil) {
  return OpticalTrain(wavelength, focal, pupil, cavity.gamma());
}

DetectorParams::DetectorParams(double eta, double pixel_area, double window)
    : eta_(eta), pixel_area_(pixel_area), window_(window) {
  if (!(eta > 0.0 && eta <= 1.0)) {
    throw Error(ErrorCode::InvalidEfficiency, "eta must lie in (0, 1] (got " + fmt(eta) + ")");
  }
  require_positive(pixel_area, "pixel_area");
  require_positive(window, "window");
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::Undefined: return "UNDEFINED";
  }
  return "UNDEFINED";
}

Verdict ValidityFigure::verdict() const noexcept {
  if (!pupil_defined) return Verdict::Undefined;
  return value >= threshold ? Verdict::Pass : Verdict::Fail;
}

ValidityFigure validity_figure(double s_peak_sq, const OpticalTrain& train,
                               const CavityParams& cavity, double threshold) {
  if (!(s_peak_sq >= 0.0)) {
    throw Error(ErrorCode::NonPositiveParameter, "s^2 must be >= 0 (got " + fmt(s_peak_sq) + ")");
  }
  const auto area = train.pupil().area();
  if (!area) {
    return ValidityFigure{std::numeric_limits<double>::infinity(), false, threshold};
  }
  const double lf = train.lambda_f();
  const double value = s_peak_sq * (lf * lf / *area) * (2.0 * kPi / cavity.gamma());
  return ValidityFigure{value, true, threshold};
}

}  // namespace paramp
