// One line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "paramp/detection.hpp"
#include "paramp/modes.hpp"
#include "paramp/propagation.hpp"
#include "paramp/transfer.hpp"

using namespace paramp;

namespace {

const double kS = std::sqrt(1e19);

struct Outcome {
  bool pass;
  std::string detail;
};

char buf[512];

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

OpticalTrain example_train(const CavityParams& c, PupilSpec pupil = PupilSpec::square(1e-2)) {
  return derive_scales(c, 1e-6, 0.1, pupil);
}

ValidityFigure validity_for(const RealField& object, const OpticalTrain& t, const CavityParams& c) {
  double peak = 0.0;
  for (double s : object.values()) peak = std::max(peak, s * s);
  return validity_figure(peak, t, c);
}

Outcome confocal_ideal() {
  const CavityParams c(1e8, 0.0, 0.5, Geometry::Confocal);
  const auto t = example_train(c);
  const TransverseGrid grid(32, 2 * t.rho0());
  const auto object = RealField::constant(grid, kS);
  const auto maps = transfer_maps(c, t, grid);
  const DetectorParams det(1.0, 1e-10, 1e-6);
  const auto f = noise_figure_empirical(detect(object, maps, det, validity_for(object, t, c), c.gamma()));
  double g_err = 0.0, f_err = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    g_err = std::max(g_err, std::abs(maps.gain[k] - 9.0));
    f_err = std::max(f_err, std::abs(f.at(k) - 1.0));
  }
  return {g_err <= 1e-12 && f_err <= 1e-12, fmt("max|G-9|=%.2e max|F-1|=%.2e", g_err, f_err)};
}

Outcome bogoliubov() {
  std::mt19937_64 rng(20261019);
  std::uniform_real_distribution<double> detuning(-3, 3), omega(-3, 3), radius(0, 2), pump(0, 0.95);
  const CavityParams base(1e8, 0.0, 0.5, Geometry::Planar);
  const auto t = example_train(base);
  double worst = 0.0;
  std::size_t used = 0, skipped = 0;
  while (used < 100000) {
    const CavityParams c(1e8, detuning(rng), pump(rng), Geometry::Planar);
    const double rho = radius(rng) * t.rho0();
    const double om = omega(rng);
    try {
      const auto p = local_transfer(c, t, rho, om, 1e-6);
      worst = std::max(worst, std::abs(std::norm(p.u) - std::norm(p.v) - 1.0));
      ++used;
    } catch (const Error&) {
      ++skipped;
    }
  }
  return {worst <= 1e-10, fmt("%zu samples (%zu near-singular skipped), max||U|^2-|V|^2-1|=%.2e",
                              used, skipped, worst)};
}

Outcome gain_delta_squared_form() {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> delta(-3, 3), pump(0, 0.95);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double d = delta(rng), a = pump(rng);
    const double g = gain(transfer_pair(d, d, a));
    const double ref = (std::pow((1 + a) * (1 + a) - d * d, 2) + 4 * d * d) /
                       std::pow(1 + d * d - a * a, 2);
    worst = std::max(worst, std::abs(g - ref) / std::max(1.0, ref));
  }
  return {worst <= 1e-12, fmt("10000 points, max rel error %.2e", worst)};
}

Outcome planar_ring() {
  const CavityParams c(1e8, -1.0, 0.5, Geometry::Planar);
  const auto t = example_train(c);
  const TransverseGrid grid(64, 2 * t.rho0());  // spacing rho0/16
  const auto f = noise_figure_map(c, t, grid, 1.0);
  const double h = grid.spacing();
  double ring_min = INFINITY;
  for (std::size_t iy = 0; iy < grid.n(); ++iy) {
    for (std::size_t ix = 0; ix < grid.n(); ++ix) {
      if (std::abs(grid.radius(ix, iy) - t.rho0()) <= h) ring_min = std::min(ring_min, f.at(ix, iy));
    }
  }
  const std::size_t o = grid.origin();
  const double at0 = f.at(o, o);
  const double at15 = f.at(o + 24, o);
  const bool ok = ring_min < 1 + 1e-9 && at0 > 1.01 && at15 > 1.01;
  return {ok, fmt("min F near rho0 = 1%+.2e, F(0)=%.4f, F(1.5 rho0)=%.4f", ring_min - 1, at0, at15)};
}

Outcome fft_vs_direct() {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> z;
  double worst = 0.0;
  int pairs = 0;
  for (std::size_t n : {16u, 32u}) {
    const TransverseGrid grid(n, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<std::complex<double>> kv(grid.size()), fv(grid.size());
      for (auto& v : kv) v = {z(rng), z(rng)};
      for (auto& v : fv) v = {z(rng), z(rng)};
      const ComplexField k(grid, kv), f(grid, fv);
      worst = std::max(worst, relative_l2_difference(convolve(k, f), direct_convolution_oracle(k, f)));
      ++pairs;
    }
  }
  return {worst <= 1e-10, fmt("%d pairs on 16x16 and 32x32, max rel L2 %.2e", pairs, worst)};
}

Outcome mode_space() {
  const CavityParams c(1e8, 0.3, 0.6, Geometry::Confocal);
  const auto t = example_train(c, PupilSpec::infinite());
  const double w = t.rho0();
  const TransverseGrid grid(128, 8 * w);
  const ModeBasis basis(w, 8, 8, grid);
  std::mt19937_64 rng(8);
  std::normal_distribution<double> z;
  std::vector<std::complex<double>> values(grid.size());
  for (std::size_t m = 0; m < basis.size(); ++m) {
    if (!basis.indices()[m].even()) continue;
    const std::complex<double> coef(z(rng), z(rng));
    for (std::size_t k = 0; k < grid.size(); ++k) values[k] += coef * basis.mode(m)[k];
  }
  const ComplexField object(grid, values);
  const auto pointwise = amplify_confocal(object, c, t).image;
  const auto pair = local_transfer(c, t, 0.0);
  const auto modal = reconstruct(amplify_even_modes(decompose(object, basis), pair), basis);
  const double err = relative_l2_difference(modal, pointwise);
  return {err <= 1e-8, fmt("%zu modes, rel L2 %.2e", basis.size(), err)};
}

Outcome monte_carlo() {
  const CavityParams c(1e8, 0.0, 0.5, Geometry::Confocal);
  const auto t = example_train(c);
  const TransverseGrid grid(32, 2 * t.rho0());
  const auto object = RealField::constant(grid, kS);
  const auto maps = transfer_maps(c, t, grid);
  const DetectorParams det(0.8, 1e-10, 1e-6);
  const auto report = detect(object, maps, det, validity_for(object, t, c), c.gamma());
  const auto mc = monte_carlo_image(report.image_mean, report.image_variance, 2026, 10000);
  const auto analytic = noise_figure_empirical(report);
  std::size_t inside = 0;
  double f_sampled = 0.0, f_analytic = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const bool m = std::abs(mc.mean[k] - report.image_mean[k]) <= 3 * mc.mean_stderr[k];
    const bool v = std::abs(mc.variance[k] - report.image_variance[k]) <= 3 * mc.variance_stderr[k];
    inside += m && v;
    f_sampled += report.object_snr.at(k) / (mc.mean[k] * mc.mean[k] / mc.variance[k]);
    f_analytic += analytic.at(k);
  }
  f_sampled /= grid.size();
  f_analytic /= grid.size();
  const double fraction = static_cast<double>(inside) / grid.size();
  const double f_err = std::abs(f_sampled - f_analytic) / f_analytic;
  return {fraction >= 0.99 && f_err <= 0.05 && std::abs(report.image_mean[0] - 7200) < 1e-9,
          fmt("<N_I>=%.1f, %.4f of pixels within 3 SE, F sampled %.4f vs %.4f (%.2f%%)",
              report.image_mean[0], fraction, f_sampled, f_analytic, 100 * f_err)};
}

Outcome detection_loss() {
  double worst = 0.0;
  bool monotone = true;
  for (double eta : {0.25, 0.5, 0.8}) {
    for (double a : {0.0, 0.5, 0.9}) {
      const auto p = transfer_pair(0.0, 0.0, a);
      const double g = gain(p);
      const double f = noise_figure(g, squeeze(p), eta);
      worst = std::max(worst, std::abs(f - (1 - eta + eta * g) / (eta * g)));
    }
    double prev_g = 0.0, prev_f = INFINITY;
    for (int i = 0; i <= 95; ++i) {
      const auto p = transfer_pair(0.0, 0.0, i / 100.0);
      const double g = gain(p);
      const double f = noise_figure(g, squeeze(p), eta);
      if (!(g > prev_g && f < prev_f)) monotone = false;
      prev_g = g;
      prev_f = f;
    }
  }
  return {worst <= 1e-12 && monotone,
          fmt("max |F - (1-eta+eta G)/(eta G)| = %.2e, strictly decreasing in G: %s", worst,
              monotone ? "yes" : "no")};
}

Outcome gram() {
  const double w = 1e-5;
  const TransverseGrid grid(128, 6 * w);
  const ModeBasis basis(w, 4, 4, grid);
  const auto d = gram_diagnostics(basis);
  return {d.max_deviation < 1e-6, fmt("%zu modes, max |G - I| = %.2e", basis.size(), d.max_deviation)};
}

struct Criterion {
  int id;
  const char* name;
  double limit_s;  // 0: none
  std::function<Outcome()> fn;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "confocal ideal case G=9, F=1", 1.0, confocal_ideal},
      {2, "Bogoliubov identity |U|^2-|V|^2=1", 5.0, bogoliubov},
      {3, "gain closed form (delta^2 form)", 0.0, gain_delta_squared_form},
      {4, "planar noiseless ring at rho0", 0.0, planar_ring},
      {5, "FFT convolution vs direct oracle", 10.0, fft_vs_direct},
      {6, "mode space vs pointwise confocal amplification", 0.0, mode_space},
      {7, "Monte Carlo photocount consistency", 0.0, monte_carlo},
      {8, "detection-loss law", 0.0, detection_loss},
      {9, "Gauss-Laguerre Gram matrix", 10.0, gram},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome r;
    try {
      r = c.fn();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_s > 0 && secs > c.limit_s) {
      r.pass = false;
      r.detail += fmt(" [over %.0f s limit]", c.limit_s);
    }
    std::printf("%s  %d  %s: %s (%.2f s)\n", r.pass ? "PASS" : "FAIL", c.id, c.name, r.detail.c_str(),
                secs);
    failures += !r.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
