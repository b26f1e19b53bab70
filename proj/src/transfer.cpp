#include "paramp/transfer.hpp"

#include <cmath>
#include <sstream>

namespace paramp {

Mismatch mismatch(const CavityParams& cavity, const OpticalTrain& train, double rho, double omega) {
  if (cavity.geometry() == Geometry::Confocal) {
    return Mismatch{cavity.detuning() - omega, std::nullopt, omega, Geometry::Confocal};
  }
  const double r = rho / train.rho0();
  return Mismatch{cavity.detuning() - omega + r * r, rho, omega, Geometry::Planar};
}

TransferPair transfer_pair(double delta_plus, double delta_minus, double pump, double guard) {
  using namespace std::complex_literals;
  const std::complex<double> lead = 1.0 - 1i * delta_minus;
  const double a2 = pump * pump;
  const std::complex<double> den = (1.0 + 1i * delta_plus) * lead - a2;
  if (!(std::abs(den) > guard)) {
    std::ostringstream os;
    os << "transfer denominator |D|=" << std::abs(den) << " below guard " << guard
       << " (delta+=" << delta_plus << ", delta-=" << delta_minus << ", pump=" << pump << ")";
    throw Error(ErrorCode::NearSingularDenominator, os.str());
  }
  TransferPair out;
  out.u = ((1.0 - 1i * delta_plus) * lead + a2) / den;
  out.v = 2.0 * pump / den;
  out.denominator = den;
  out.delta_plus = delta_plus;
  out.delta_minus = delta_minus;
  out.pump = pump;
  return out;
}

TransferPair transfer_pair(const Mismatch& plus, const Mismatch& minus, double pump, double guard) {
  return transfer_pair(plus.value, minus.value, pump, guard);
}

TransferPair local_transfer(const CavityParams& cavity, const OpticalTrain& train, double rho,
                            double omega, double guard) {
  return transfer_pair(mismatch(cavity, train, rho, omega), mismatch(cavity, train, rho, -omega),
                       cavity.pump(), guard);
}

double gain(const TransferPair& pair) { return std::norm(pair.u + pair.v); }

double gain_closed_form(double delta, double pump) {
  const double d2 = delta * delta;
  const double a = (1.0 + pump) * (1.0 + pump) - d2;
  const double den = 1.0 + d2 - pump * pump;
  return (a * a + 4.0 * d2) / (den * den);
}

SqueezeParams squeeze(const TransferPair& pair) {
  const double au = std::abs(pair.u);
  const double av = std::abs(pair.v);
  if (av == 0.0) return {};
  const double two_theta = std::arg(pair.u + pair.v) - std::arg(pair.u) - std::arg(pair.v);
  // theta is only defined modulo pi; cos^2 and sin^2 do not see the shift.
  return {std::log(au + av), 0.5 * std::remainder(two_theta, 2.0 * kPi)};
}

double quadrature_noise(const SqueezeParams& sq) {
  const double c = std::cos(sq.theta);
  const double s = std::sin(sq.theta);
  return c * c * std::exp(2.0 * sq.r) + s * s * std::exp(-2.0 * sq.r);
}

double noise_figure(double g, const SqueezeParams& sq, double eta) {
  return (1.0 - eta + eta * quadrature_noise(sq)) / (eta * g);
}

TransferMaps transfer_maps(const CavityParams& cavity, const OpticalTrain& train,
                           const TransverseGrid& grid, double guard) {
  const std::size_t size = grid.size();
  std::vector<double> g(size), r(size), theta(size);

  if (cavity.geometry() == Geometry::Confocal) {
    const auto pair = transfer_pair(cavity.detuning(), cavity.detuning(), cavity.pump(), guard);
    const auto sq = squeeze(pair);
    return TransferMaps{RealField::constant(grid, gain(pair)), RealField::constant(grid, sq.r),
                        RealField::constant(grid, sq.theta)};
  }

  for (std::size_t iy = 0; iy < grid.n(); ++iy) {
    for (std::size_t ix = 0; ix < grid.n(); ++ix) {
      const std::size_t k = grid.index(ix, iy);
      try {
        const auto pair = local_transfer(cavity, train, grid.radius(ix, iy), 0.0, guard);
        const auto sq = squeeze(pair);
        g[k] = gain(pair);
        r[k] = sq.r;
        theta[k] = sq.theta;
      } catch (const Error& e) {
        std::ostringstream os;
        os << e.what() << " at (x=" << grid.coord(ix) << ", y=" << grid.coord(iy) << ")";
        throw Error(e.code(), os.str());
      }
    }
  }
  return TransferMaps{RealField(grid, std::move(g)), RealField(grid, std::move(r)),
                      RealField(grid, std::move(theta))};
}

RealField gain_map(const CavityParams& cavity, const OpticalTrain& train,
                   const TransverseGrid& grid) {
  return transfer_maps(cavity, train, grid).gain;
}

RealField noise_figure_map(const TransferMaps& maps, double eta) {
  const auto& grid = maps.gain.grid();
  std::vector<double> f(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    f[k] = noise_figure(maps.gain[k], maps.squeeze_at(k), eta);
  }
  return RealField(grid, std::move(f));
}

RealField noise_figure_map(const CavityParams& cavity, const OpticalTrain& train,
                           const TransverseGrid& grid, double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) {
    throw Error(ErrorCode::InvalidEfficiency, "eta must lie in (0, 1]");
  }
  return noise_figure_map(transfer_maps(cavity, train, grid), eta);
}

}  // namespace paramp
