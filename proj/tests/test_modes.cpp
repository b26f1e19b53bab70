#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "paramp/modes.hpp"
#include "paramp/propagation.hpp"

namespace paramp {
namespace {

using cd = std::complex<double>;

constexpr double kWaist = 1.0;

TransverseGrid grid_for(double extent_in_waists, std::size_t n) {
  return TransverseGrid(n, extent_in_waists * kWaist);
}

double inner(const ComplexField& a, const ComplexField& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.grid().size(); ++k) s += (std::conj(a[k]) * b[k]).real();
  return s * a.grid().cell_area();
}

ModeExpansion random_expansion(const ModeBasis& basis, std::mt19937_64& rng, bool even_only) {
  std::normal_distribution<double> n;
  ModeExpansion e;
  for (const auto& idx : basis.indices()) {
    if (even_only && !idx.even()) continue;
    e.indices.push_back(idx);
    e.coefficients.emplace_back(n(rng), n(rng));
  }
  return e;
}

TEST(ModeFunction, FundamentalIsNormalisedGaussian) {
  const auto grid = grid_for(6, 128);
  const auto f = mode_function({0, 0, Azimuth::Cosine}, kWaist, grid);
  const std::size_t o = grid.origin();
  EXPECT_NEAR(f.at(o, o).real(), std::sqrt(2.0 / kPi) / kWaist, 1e-15);
  const double x = grid.coord(o + 5);
  EXPECT_NEAR(f.at(o + 5, o).real(), std::sqrt(2.0 / kPi) * std::exp(-x * x), 1e-15);
  EXPECT_NEAR(inner(f, f), 1.0, 1e-8);
}

TEST(ModeFunction, ParityFollowsAzimuthalIndex) {
  const auto grid = grid_for(6, 64);
  for (int l = 0; l <= 4; ++l) {
    for (auto az : {Azimuth::Cosine, Azimuth::Sine}) {
      if (l == 0 && az == Azimuth::Sine) continue;
      const auto f = mode_function({1, l, az}, kWaist, grid);
      const auto r = f.reflected();
      const double sign = l % 2 == 0 ? 1.0 : -1.0;
      for (std::size_t iy = 1; iy < grid.n(); ++iy) {
        for (std::size_t ix = 1; ix < grid.n(); ++ix) {
          ASSERT_EQ(r.at(ix, iy), sign * f.at(ix, iy)) << "l=" << l;
        }
      }
    }
  }
}

TEST(ModeFunction, RadialOrthogonality) {
  const auto grid = grid_for(6, 128);
  const auto f00 = mode_function({0, 0, Azimuth::Cosine}, kWaist, grid);
  const auto f10 = mode_function({1, 0, Azimuth::Cosine}, kWaist, grid);
  EXPECT_LT(std::abs(inner(f00, f10)), 1e-6);
  // one radial node: sign change along +x
  const std::size_t o = grid.origin();
  EXPECT_GT(f10.at(o, o).real(), 0.0);
  EXPECT_LT(f10.at(o + 20, o).real(), 0.0);
}

TEST(ModeFunction, Errors) {
  const auto grid = grid_for(4, 64);
  try {
    mode_function({4, 4, Azimuth::Cosine}, kWaist, grid);  // reach sqrt(13) > 2.8
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::GridTooSmallForMode);
  }
  EXPECT_THROW(mode_function({0, 0, Azimuth::Sine}, kWaist, grid), Error);
  EXPECT_THROW(mode_function({-1, 0, Azimuth::Cosine}, kWaist, grid), Error);
  EXPECT_THROW(ModeBasis(kWaist, 4, 4, grid), Error);
}

TEST(ModeBasis, GramIsIdentity) {
  const ModeBasis basis(kWaist, 4, 4, grid_for(6, 128));
  EXPECT_EQ(basis.size(), 5u * (1 + 2 * 4));
  const auto d = gram_diagnostics(basis);
  EXPECT_LT(d.max_deviation, 1e-6);
}

TEST(ModeIndex, FrequencyClass) {
  EXPECT_TRUE((ModeIndex{0, 2, Azimuth::Sine}).even());
  EXPECT_FALSE((ModeIndex{3, 1, Azimuth::Cosine}).even());
  EXPECT_EQ((ModeIndex{1, 2, Azimuth::Sine}).label(), "(1,2,sin)");
  EXPECT_EQ((ModeIndex{1, 0, Azimuth::Cosine}).label(), "(1,0)");
}

TEST(Decompose, Examples) {
  const auto grid = grid_for(6, 128);
  const ModeBasis basis(kWaist, 2, 2, grid);
  const std::size_t i00 = basis.find({0, 0, Azimuth::Cosine});
  const std::size_t i10 = basis.find({1, 0, Azimuth::Cosine});
  ASSERT_LT(i00, basis.size());
  EXPECT_EQ(basis.find({7, 0, Azimuth::Cosine}), basis.size());

  const auto unit = decompose(to_complex(basis.mode(i00)), basis);
  for (std::size_t m = 0; m < basis.size(); ++m) {
    EXPECT_NEAR(std::abs(unit.coefficients[m] - cd(m == i00 ? 1.0 : 0.0)), 0.0, 1e-8);
  }

  std::vector<double> mix(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) mix[k] = 2 * basis.mode(i00)[k] + 3 * basis.mode(i10)[k];
  const auto e = decompose(to_complex(RealField(grid, mix)), basis);
  EXPECT_NEAR(e.coefficients[i00].real(), 2.0, 1e-8);
  EXPECT_NEAR(e.coefficients[i10].real(), 3.0, 1e-8);
  EXPECT_LT(e.residual, 1e-8);
}

TEST(Decompose, GridMismatch) {
  const ModeBasis basis(kWaist, 1, 1, grid_for(6, 64));
  const auto f = ComplexField::constant(grid_for(6, 32), 1.0);
  EXPECT_THROW(decompose(f, basis), Error);
}

TEST(Decompose, CompletenessTrend) {
  const auto grid = grid_for(8, 128);
  const double w = 1.3 * kWaist;
  const auto g = ComplexField::from_function(grid, [&](double x, double y) {
    return cd(std::exp(-(x * x + y * y) / (w * w)), 0.0);
  });
  double previous = 1.0;
  for (int pmax : {2, 4, 8}) {
    const double res = decompose(g, ModeBasis(kWaist, pmax, 0, grid)).residual;
    EXPECT_LT(res, previous) << "pmax=" << pmax;
    previous = res;
  }
}

TEST(Decompose, RoundTripOnSpan) {
  const auto grid = grid_for(7, 128);
  const ModeBasis basis(kWaist, 3, 3, grid);
  std::mt19937_64 rng(31);
  const auto e = random_expansion(basis, rng, false);
  const auto back = decompose(reconstruct(e, basis), basis);
  for (std::size_t m = 0; m < e.coefficients.size(); ++m) {
    EXPECT_NEAR(std::abs(back.coefficients[m] - e.coefficients[m]), 0.0, 1e-8);
  }
}

TEST(SplitEvenOdd, Examples) {
  const auto grid = grid_for(7, 128);
  const ModeBasis basis(kWaist, 3, 3, grid);
  std::mt19937_64 rng(37);

  const auto even_only = random_expansion(basis, rng, true);
  EXPECT_TRUE(split_even_odd(even_only).second.indices.empty());

  ModeExpansion single{{{0, 1, Azimuth::Cosine}}, {1.0}, 0.0};
  const auto [e1, o1] = split_even_odd(single);
  EXPECT_TRUE(e1.indices.empty());
  EXPECT_EQ(l2_norm(reconstruct(e1, basis)), 0.0);

  const auto mixed = random_expansion(basis, rng, false);
  const auto field = reconstruct(mixed, basis);
  const auto [even, odd] = split_even_odd(mixed);
  EXPECT_EQ(even.indices.size() + odd.indices.size(), mixed.indices.size());
  EXPECT_LT(relative_l2_difference(reconstruct(even, basis), even_projection(field)), 1e-8);
}

TEST(AmplifyEvenModes, CommutesWithConfocalAmplification) {
  const CavityParams c(1e8, 0.0, 0.5, Geometry::Confocal);
  const auto train = derive_scales(c, 1e-6, 0.1);
  const double waist = train.rho0();
  const TransverseGrid grid(128, 7.0 * waist);
  const ModeBasis basis(waist, 3, 3, grid);
  std::mt19937_64 rng(41);
  auto e = random_expansion(basis, rng, false);
  for (auto& v : e.coefficients) v = v.real();  // real object amplitude
  const auto obj = reconstruct(e, basis);

  const auto pair = local_transfer(c, train, 0.0);
  const auto via_modes = reconstruct(amplify_even_modes(decompose(obj, basis), pair), basis);
  const auto direct = amplify_confocal(obj, c, train).image;
  EXPECT_LT(relative_l2_difference(via_modes, direct), 1e-8);
}

}  // namespace
}  // namespace paramp
