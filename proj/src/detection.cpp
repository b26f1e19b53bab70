#include "paramp/detection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace paramp {

double image_pixel_mean(double s, double g, const DetectorParams& det) {
  return det.exposure() * s * s * g;
}

double image_pixel_variance(double s, double g, const SqueezeParams& sq,
                            const DetectorParams& det) {
  const double eta = det.eta();
  return image_pixel_mean(s, g, det) * (1.0 - eta + eta * quadrature_noise(sq));
}

PixelStats object_pixel_stats(double s, const DetectorParams& det) {
  PixelStats out;
  out.mean = det.exposure() * s * s;
  out.variance = out.mean;
  if (out.variance > 0.0) out.snr = out.mean;
  return out;
}

MaskedField::MaskedField(RealField values, std::vector<bool> valid)
    : values_(std::move(values)), valid_(std::move(valid)) {
  if (valid_.size() != values_.grid().size()) {
    throw Error(ErrorCode::GridMismatch, "mask size does not match the grid");
  }
}

std::size_t MaskedField::valid_count() const noexcept {
  return static_cast<std::size_t>(std::count(valid_.begin(), valid_.end(), true));
}

double MaskedField::at(std::size_t k) const {
  if (!valid_.at(k)) {
    throw Error(ErrorCode::MaskedPixel, "sample " + std::to_string(k) + " is masked");
  }
  return values_[k];
}

double MaskedField::min() const {
  double out = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < valid_.size(); ++k) {
    if (valid_[k]) out = std::min(out, values_[k]);
  }
  return out;
}

double MaskedField::max() const {
  double out = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < valid_.size(); ++k) {
    if (valid_[k]) out = std::max(out, values_[k]);
  }
  return out;
}

namespace {

MaskedField snr_field(const RealField& mean, const RealField& variance) {
  const auto& grid = mean.grid();
  std::vector<double> values(grid.size(), 0.0);
  std::vector<bool> valid(grid.size(), false);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (variance[k] > 0.0) {
      values[k] = mean[k] * mean[k] / variance[k];
      valid[k] = true;
    }
  }
  return MaskedField(RealField(grid, std::move(values)), std::move(valid));
}

PixelStats pixel(const RealField& mean, const RealField& variance, const MaskedField& snr,
                 std::size_t ix, std::size_t iy) {
  const auto& grid = mean.grid();
  const std::size_t k = grid.index(ix, iy);
  PixelStats out;
  out.mean = mean[k];
  out.variance = variance[k];
  if (snr.valid(k)) out.snr = snr.values()[k];
  out.x = grid.coord(ix);
  out.y = grid.coord(iy);
  return out;
}

}  // namespace

PixelStats DetectionReport::image_pixel(std::size_t ix, std::size_t iy) const {
  return pixel(image_mean, image_variance, image_snr, ix, iy);
}

PixelStats DetectionReport::object_pixel(std::size_t ix, std::size_t iy) const {
  return pixel(object_mean, object_variance, object_snr, ix, iy);
}

DetectionReport detect(const RealField& object, const TransferMaps& maps, const DetectorParams& det,
                       const ValidityFigure& validity, double gamma) {
  require_same_grid(object.grid(), maps.gain.grid(), "detect");
  const auto& grid = object.grid();
  const auto reference = det.with_unit_efficiency();

  std::vector<double> im(grid.size()), iv(grid.size()), om(grid.size()), ov(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double s = object[k];
    im[k] = image_pixel_mean(s, maps.gain[k], det);
    iv[k] = image_pixel_variance(s, maps.gain[k], maps.squeeze_at(k), det);
    const auto o = object_pixel_stats(s, reference);
    om[k] = o.mean;
    ov[k] = o.variance;
  }
  RealField image_mean(grid, std::move(im));
  RealField image_variance(grid, std::move(iv));
  RealField object_mean(grid, std::move(om));
  RealField object_variance(grid, std::move(ov));
  auto image_snr = snr_field(image_mean, image_variance);
  auto object_snr = snr_field(object_mean, object_variance);
  return DetectionReport{det,
                         std::move(image_mean),
                         std::move(image_variance),
                         std::move(image_snr),
                         std::move(object_mean),
                         std::move(object_variance),
                         std::move(object_snr),
                         validity,
                         det.long_window(gamma)};
}

MaskedField noise_figure_empirical(const DetectionReport& report) {
  const auto& grid = report.image_mean.grid();
  std::vector<double> values(grid.size(), 0.0);
  std::vector<bool> valid(grid.size(), false);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (report.object_snr.valid(k) && report.image_snr.valid(k)) {
      values[k] = report.object_snr.values()[k] / report.image_snr.values()[k];
      valid[k] = true;
    }
  }
  return MaskedField(RealField(grid, std::move(values)), std::move(valid));
}

MonteCarloResult monte_carlo_image(const RealField& mean, const RealField& variance,
                                   std::uint64_t seed, std::size_t shots) {
  require_same_grid(mean.grid(), variance.grid(), "monte_carlo_image");
  if (shots < 1) throw Error(ErrorCode::NonPositiveParameter, "shots must be >= 1");
  const auto& grid = mean.grid();
  const std::size_t size = grid.size();

  std::vector<double> last(size), emp_mean(size), emp_var(size), se_mean(size), se_var(size);
  std::size_t low_count = 0;
  const double n = static_cast<double>(shots);

  for (std::size_t k = 0; k < size; ++k) {
    if (variance[k] < 0.0) {
      throw Error(ErrorCode::NonPositiveParameter, "variance must be >= 0");
    }
    if (mean[k] < kGaussianCountFloor) ++low_count;

    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double sigma = std::sqrt(variance[k]);

    // Welford
    double m = 0.0;
    double m2 = 0.0;
    double sample = 0.0;
    for (std::size_t i = 0; i < shots; ++i) {
      const double draw = sigma > 0.0 ? mean[k] + sigma * normal(rng) : mean[k];
      sample = std::round(std::max(draw, 0.0));
      const double d = sample - m;
      m += d / static_cast<double>(i + 1);
      m2 += d * (sample - m);
    }
    last[k] = sample;
    emp_mean[k] = m;
    emp_var[k] = shots > 1 ? m2 / (n - 1.0) : 0.0;
    se_mean[k] = std::sqrt(emp_var[k] / n);
    se_var[k] = shots > 1 ? emp_var[k] * std::sqrt(2.0 / (n - 1.0)) : 0.0;
  }

  MonteCarloResult out{RealField(grid, std::move(last)),     RealField(grid, std::move(emp_mean)),
                       RealField(grid, std::move(emp_var)),  RealField(grid, std::move(se_mean)),
                       RealField(grid, std::move(se_var)),   shots,
                       {}};
  if (low_count > 0) {
    std::ostringstream os;
    os << low_count << " pixel(s) with mean count below " << kGaussianCountFloor
       << "; Gaussian photocount approximation is poor there";
    out.warnings.push_back(os.str());
  }
  return out;
}

}  // namespace paramp
