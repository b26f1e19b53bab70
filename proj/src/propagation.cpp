#include "paramp/propagation.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>

namespace paramp {
namespace {

// FFTW planning is not thread safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class FftwBuffer {
 public:
  explicit FftwBuffer(std::size_t count)
      : data_(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * count))),
        count_(count) {
    if (!data_) throw std::bad_alloc();
    std::fill_n(reinterpret_cast<double*>(data_), 2 * count_, 0.0);
  }
  ~FftwBuffer() { fftw_free(data_); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;

  fftw_complex* get() noexcept { return data_; }
  std::complex<double>* as_complex() noexcept {
    return reinterpret_cast<std::complex<double>*>(data_);
  }

 private:
  fftw_complex* data_;
  std::size_t count_;
};

class FftwPlan {
 public:
  FftwPlan(int m, FftwBuffer& buf, int sign) {
    std::lock_guard lock(planner_mutex());
    plan_ = fftw_plan_dft_2d(m, m, buf.get(), buf.get(), sign, FFTW_ESTIMATE);
  }
  ~FftwPlan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  FftwPlan(const FftwPlan&) = delete;
  FftwPlan& operator=(const FftwPlan&) = delete;

  void execute() const { fftw_execute(plan_); }

 private:
  fftw_plan plan_;
};

double sinc(double t) {
  if (t == 0.0) return 1.0;
  const double a = kPi * t;
  return std::sin(a) / a;
}

// 2 J1(v) / v
double airy(double v) {
  if (v == 0.0) return 1.0;
  return 2.0 * std::cyl_bessel_j(1.0, std::abs(v)) / std::abs(v);
}

double peak_intensity(const ComplexField& f) {
  double out = 0.0;
  for (const auto& v : f.values()) out = std::max(out, std::norm(v));
  return out;
}

}  // namespace

ImpulseResponse ImpulseResponse::delta(const TransverseGrid& grid) { return ImpulseResponse(grid); }

ImpulseResponse::ImpulseResponse(ComplexField kernel, PupilSpec pupil)
    : grid_(kernel.grid()), kernel_(std::move(kernel)), pupil_(pupil) {
  if (pupil_.is_infinite()) {
    throw Error(ErrorCode::InvalidGrid, "an infinite pupil has no sampled kernel");
  }
}

const ComplexField& ImpulseResponse::kernel() const {
  if (!kernel_) {
    throw Error(ErrorCode::InvalidGrid, "delta impulse response has no sampled kernel");
  }
  return *kernel_;
}

ImpulseResponse impulse_response(const PupilSpec& pupil, const OpticalTrain& train,
                                 const TransverseGrid& grid) {
  if (pupil.is_infinite()) return ImpulseResponse::delta(grid);

  const double lf = train.lambda_f();
  const double lobe = lf / pupil.aperture_width();
  if (grid.spacing() > lobe / 4.0 * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "grid spacing " << grid.spacing() << " m does not resolve the pupil kernel lobe "
       << lobe << " m (need spacing <= lobe/4)";
    throw Error(ErrorCode::UnderResolvedKernel, os.str());
  }

  const double peak = *pupil.area() / lf;  // p(0) = S_p / (lambda f)
  const double d = pupil.size();
  const double edge = grid.coord(0);
  // The -L line has no +L partner; leaving it out keeps the support symmetric.
  auto sample = [&](double x, double y, auto&& profile) -> std::complex<double> {
    if (x == edge || y == edge) return 0.0;
    return peak * profile(x, y);
  };
  if (pupil.shape() == PupilShape::Square) {
    return ImpulseResponse(ComplexField::from_function(grid,
                                                       [&](double x, double y) {
                                                         return sample(x, y, [&](double u, double v) {
                                                           return sinc(d * u / lf) * sinc(d * v / lf);
                                                         });
                                                       }),
                           pupil);
  }
  return ImpulseResponse(ComplexField::from_function(grid,
                                                     [&](double x, double y) {
                                                       return sample(x, y, [&](double u, double v) {
                                                         return airy(2.0 * kPi * d * std::hypot(u, v) / lf);
                                                       });
                                                     }),
                         pupil);
}

ComplexField convolve(const ComplexField& kernel, const ComplexField& field) {
  require_same_grid(kernel.grid(), field.grid(), "convolve");
  const auto& grid = field.grid();
  const std::size_t n = grid.n();
  const std::size_t m = 2 * n;  // >= 2n - 1, no wraparound

  FftwBuffer kbuf(m * m);
  FftwBuffer fbuf(m * m);
  auto* kc = kbuf.as_complex();
  auto* fc = fbuf.as_complex();
  for (std::size_t iy = 0; iy < n; ++iy) {
    for (std::size_t ix = 0; ix < n; ++ix) {
      kc[iy * m + ix] = kernel[grid.index(ix, iy)];
      fc[iy * m + ix] = field[grid.index(ix, iy)];
    }
  }

  {
    FftwPlan fk(static_cast<int>(m), kbuf, FFTW_FORWARD);
    FftwPlan ff(static_cast<int>(m), fbuf, FFTW_FORWARD);
    fk.execute();
    ff.execute();
  }
  for (std::size_t k = 0; k < m * m; ++k) fc[k] *= kc[k];
  FftwPlan back(static_cast<int>(m), fbuf, FFTW_BACKWARD);
  back.execute();

  // Output sample m sits at full-convolution index m + n/2.
  const double scale = grid.cell_area() / static_cast<double>(m * m);
  const std::size_t shift = n / 2;
  std::vector<std::complex<double>> out(grid.size());
  for (std::size_t iy = 0; iy < n; ++iy) {
    for (std::size_t ix = 0; ix < n; ++ix) {
      out[grid.index(ix, iy)] = fc[(iy + shift) * m + (ix + shift)] * scale;
    }
  }
  return ComplexField(grid, std::move(out));
}

ComplexField direct_convolution_oracle(const ComplexField& kernel, const ComplexField& field) {
  require_same_grid(kernel.grid(), field.grid(), "direct_convolution_oracle");
  const auto& grid = field.grid();
  const std::size_t n = grid.n();
  if (n > kOracleMaxGrid) {
    throw Error(ErrorCode::GridTooLargeForOracle,
                "direct convolution limited to n <= " + std::to_string(kOracleMaxGrid) +
                    " (got " + std::to_string(n) + ")");
  }
  const auto half = static_cast<std::ptrdiff_t>(n / 2);
  const auto sn = static_cast<std::ptrdiff_t>(n);
  std::vector<std::complex<double>> out(grid.size());
  for (std::ptrdiff_t oy = 0; oy < sn; ++oy) {
    for (std::ptrdiff_t ox = 0; ox < sn; ++ox) {
      std::complex<double> acc = 0.0;
      for (std::ptrdiff_t jy = 0; jy < sn; ++jy) {
        const std::ptrdiff_t ky = oy - jy + half;
        if (ky < 0 || ky >= sn) continue;
        for (std::ptrdiff_t jx = 0; jx < sn; ++jx) {
          const std::ptrdiff_t kx = ox - jx + half;
          if (kx < 0 || kx >= sn) continue;
          acc += kernel.at(static_cast<std::size_t>(kx), static_cast<std::size_t>(ky)) *
                 field.at(static_cast<std::size_t>(jx), static_cast<std::size_t>(jy));
        }
      }
      out[grid.index(static_cast<std::size_t>(ox), static_cast<std::size_t>(oy))] =
          acc * grid.cell_area();
    }
  }
  return ComplexField(grid, std::move(out));
}

ComplexField apply_pupil(const ImpulseResponse& response, const OpticalTrain& train,
                         const ComplexField& field) {
  require_same_grid(response.grid(), field.grid(), "apply_pupil");
  if (response.is_delta()) return field;
  const double inv_lf = 1.0 / train.lambda_f();
  return convolve(response.kernel(), field).map([inv_lf](std::complex<double> v) {
    return v * inv_lf;
  });
}

ComplexField even_projection(const ComplexField& field) {
  const auto& grid = field.grid();
  std::vector<std::complex<double>> out(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    out[k] = 0.5 * (field[k] + field[grid.reflect_index(k)]);
  }
  return ComplexField(grid, std::move(out));
}

double odd_weight(const ComplexField& field) {
  const auto& grid = field.grid();
  double odd = 0.0;
  double total = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    odd += std::norm(0.5 * (field[k] - field[grid.reflect_index(k)]));
    total += std::norm(field[k]);
  }
  return total == 0.0 ? 0.0 : odd / total;
}

PropagationResult amplify_planar(const ComplexField& object, const CavityParams& cavity,
                                 const OpticalTrain& train, double omega,
                                 double validity_threshold) {
  const auto& grid = object.grid();
  const auto planar = cavity.with_geometry(Geometry::Planar);
  const auto response = impulse_response(train.pupil(), train, grid);

  std::vector<std::complex<double>> u(grid.size()), v(grid.size()), src(grid.size());
  for (std::size_t iy = 0; iy < grid.n(); ++iy) {
    for (std::size_t ix = 0; ix < grid.n(); ++ix) {
      const std::size_t k = grid.index(ix, iy);
      TransferPair pair;
      try {
        pair = local_transfer(planar, train, grid.radius(ix, iy), omega);
      } catch (const Error& e) {
        std::ostringstream os;
        os << e.what() << " at (x=" << grid.coord(ix) << ", y=" << grid.coord(iy) << ")";
        throw Error(e.code(), os.str());
      }
      u[k] = pair.u;
      v[k] = pair.v;
      src[k] = pair.u * object[k] + pair.v * std::conj(object[k]);
    }
  }

  PropagationResult result{
      apply_pupil(response, train, ComplexField(grid, std::move(src))),
      Geometry::Planar,
      ComplexField(grid, std::move(u)),
      ComplexField(grid, std::move(v)),
      validity_figure(peak_intensity(object), train, planar, validity_threshold),
      is_real(object),
      std::nullopt,
      {},
  };
  if (!result.mean_field_exact) {
    result.warnings.emplace_back("complex object: detection closed forms assume a real amplitude");
  }
  return result;
}

PropagationResult amplify_confocal(const ComplexField& object, const CavityParams& cavity,
                                   const OpticalTrain& train, double omega,
                                   double validity_threshold) {
  const auto& grid = object.grid();
  const auto confocal = cavity.with_geometry(Geometry::Confocal);
  const auto response = impulse_response(train.pupil(), train, grid);
  const auto pair = local_transfer(confocal, train, 0.0, omega);

  const auto even = even_projection(object);
  const auto src = even.map([&pair](std::complex<double> s) {
    return pair.u * s + pair.v * std::conj(s);
  });

  PropagationResult result{
      apply_pupil(response, train, src),
      Geometry::Confocal,
      ComplexField::constant(grid, pair.u),
      ComplexField::constant(grid, pair.v),
      validity_figure(peak_intensity(object), train, confocal, validity_threshold),
      is_real(object),
      std::nullopt,
      {},
  };
  if (!result.mean_field_exact) {
    result.warnings.emplace_back("complex object: detection closed forms assume a real amplitude");
  }
  const double odd = odd_weight(object);
  if (odd > kOddWeightTolerance) {
    result.discarded_odd_weight = odd;
    std::ostringstream os;
    os << "odd component discarded (relative L2 weight " << odd << ")";
    result.warnings.push_back(os.str());
  }
  return result;
}

PropagationResult amplify(const ComplexField& object, const CavityParams& cavity,
                          const OpticalTrain& train, double omega, double validity_threshold) {
  if (cavity.geometry() == Geometry::Confocal) {
    return amplify_confocal(object, cavity, train, omega, validity_threshold);
  }
  return amplify_planar(object, cavity, train, omega, validity_threshold);
}

}  // namespace paramp
