#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"
#include "zkb/domain.hpp"
#include "zkb/error.hpp"
#include "zkb/linear.hpp"

namespace zkb {
namespace {

using test::kPi;

TEST(PlanDomain, DefaultScaleHasUnitFirstEigenvalue) {
  const DomainConfig d = plan_domain(kPi, 16 * kPi, 256, 64, 0.5);
  EXPECT_DOUBLE_EQ(d.lambda1(), 1.0);
  EXPECT_EQ(d.nx(), 256);
  EXPECT_EQ(d.ny(), 64);
}

TEST(PlanDomain, FirstEigenvalueFollowsWidth) {
  const DomainConfig d = plan_domain(2.0, 8.0, 16, 8, 1.0);
  EXPECT_NEAR(d.lambda1(), kPi * kPi / 4.0, 1e-15);
  EXPECT_NEAR(d.lambda1(), 2.4674, 1e-4);
  EXPECT_NEAR(d.lambda(3), 9.0 * kPi * kPi / 4.0, 1e-13);
}

TEST(PlanDomain, FrequencyTable) {
  const DomainConfig d = plan_domain(kPi, 4.0, 16, 8, 1.0);
  for (int jx = 0; jx < 16; ++jx) {
    const int j = d.frequency_index(jx);
    EXPECT_GE(j, -8);
    EXPECT_LE(j, 7);
    EXPECT_EQ(d.storage_index(j), jx);
    EXPECT_DOUBLE_EQ(d.xi(jx), kPi * j / 4.0);
  }
  EXPECT_TRUE(d.is_nyquist(8));
}

TEST(PlanDomain, RejectsInvalidArguments) {
  EXPECT_THROW(plan_domain(-1.0, 8.0, 16, 8, 1.0), ConfigError);
  EXPECT_THROW(plan_domain(0.0, 8.0, 16, 8, 1.0), ConfigError);
  EXPECT_THROW(plan_domain(1.0, -8.0, 16, 8, 1.0), ConfigError);
  EXPECT_THROW(plan_domain(1.0, 8.0, 15, 8, 1.0), ConfigError);
  EXPECT_THROW(plan_domain(1.0, 8.0, 6, 8, 1.0), ConfigError);
  EXPECT_THROW(plan_domain(1.0, 8.0, 16, 3, 1.0), ConfigError);
  EXPECT_THROW(plan_domain(1.0, 8.0, 16, 8, 0.0), ConfigError);
  EXPECT_THROW(plan_domain(1.0, 8.0, 16, 8, std::nan("")), ConfigError);
}

class Transforms : public ::testing::Test {
 protected:
  DomainConfig d = plan_domain(2.0, 5.0, 64, 16, 0.5);
};

TEST_F(Transforms, FirstEigenfunctionIsOneCoefficient) {
  const GridField f = test::sample(d, [&](double, double y) { return std::sin(kPi * y / d.L()); });
  const SpectralField s = to_spectral(f, d);
  EXPECT_NEAR(s.at(0, 1).real(), 1.0, 1e-14);
  EXPECT_NEAR(s.at(0, 1).imag(), 0.0, 1e-14);
  SpectralField rest = s;
  rest.at(0, 1) = 0.0;
  EXPECT_LT(test::max_abs(rest), 1e-14);
}

TEST_F(Transforms, TravelingModeIsConjugatePair) {
  const double xi1 = kPi / d.X();
  const GridField f =
      test::sample(d, [&](double x, double y) { return std::cos(xi1 * x) * std::sin(2 * kPi * y / d.L()); });
  const SpectralField s = to_spectral(f, d);
  EXPECT_NEAR(std::abs(s.at(1, 2) - Complex(0.5, 0.0)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(s.at(-1, 2) - Complex(0.5, 0.0)), 0.0, 1e-14);
  SpectralField rest = s;
  rest.at(1, 2) = 0.0;
  rest.at(-1, 2) = 0.0;
  EXPECT_LT(test::max_abs(rest), 1e-14);
}

TEST_F(Transforms, ZeroMapsToZero) {
  EXPECT_EQ(test::max_abs(to_spectral(GridField(d), d)), 0.0);
  EXPECT_EQ(to_grid(SpectralField(d), d).max_abs(), 0.0);
}

TEST_F(Transforms, SingleCoefficientSynthesizesSine) {
  SpectralField s(d);
  s.at(0, 1) = 1.0;
  const GridField g = to_grid(s, d);
  const GridField want = test::sample(d, [&](double, double y) { return std::sin(kPi * y / d.L()); });
  EXPECT_LT(test::max_abs_diff(g, want), 1e-14);
}

TEST_F(Transforms, RoundtripOnArbitraryGridValues) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const GridField f = test::random_grid(d, seed);
    const GridField back = to_grid(to_spectral(f, d), d);
    EXPECT_LT(test::max_abs_diff(f, back), 1e-12 * f.max_abs());
  }
}

TEST(TransformShapes, RoundtripOnSeveralShapes) {
  for (auto [nx, ny] : {std::pair{8, 4}, std::pair{16, 7}, std::pair{30, 10}, std::pair{256, 64}}) {
    const DomainConfig d = plan_domain(1.3, 3.0, nx, ny, 0.2);
    const GridField f = test::random_grid(d, static_cast<std::uint64_t>(nx * ny));
    EXPECT_LT(test::max_abs_diff(f, to_grid(to_spectral(f, d), d)), 1e-12 * f.max_abs()) << nx << "x" << ny;
  }
}

TEST_F(Transforms, ParsevalOnHundredRandomFields) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const GridField f = test::random_grid(d, 1000 + seed);
    double grid = 0.0;
    for (double v : f.values()) grid += v * v;
    grid *= d.cell_area();
    const SpectralField s = to_spectral(f, d);
    double spec = 0.0;
    for (const auto& c : s.coeffs()) spec += std::norm(c);
    spec *= d.parseval_weight();
    ASSERT_LT(std::abs(grid - spec), 1e-12 * grid) << "seed " << seed;
  }
}

TEST_F(Transforms, ParsevalMatchesContinuousIntegral) {
  // ∫∫ (cos(ξ1 x) sin(πy/L))^2 over [-X, X) x (0, L) = X L / 2.
  const double xi1 = kPi / d.X();
  const GridField f = test::sample(d, [&](double x, double y) { return std::cos(xi1 * x) * std::sin(kPi * y / d.L()); });
  double spec = 0.0;
  for (const auto& c : to_spectral(f, d).coeffs()) spec += std::norm(c);
  EXPECT_NEAR(d.parseval_weight() * spec, d.X() * d.L() / 2.0, 1e-13);
}

TEST_F(Transforms, SeriesVanishesAtWalls) {
  const SpectralField s = test::random_band(d, 10, 12, 3);
  for (double x : {-d.X(), -1.0, 0.3, 2.0}) {
    EXPECT_EQ(evaluate_at(s, x, 0.0, d), 0.0);
    EXPECT_LT(std::abs(evaluate_at(s, x, d.L(), d)), 1e-13 * test::max_abs(s) * d.nx() * d.ny());
  }
  const GridField walls = partial_derivative_with_walls(s, 0, 0, d);
  for (int i = 0; i < d.nx(); ++i) {
    EXPECT_EQ(walls(i, 0), 0.0);
    EXPECT_EQ(walls(i, d.ny() + 1), 0.0);
  }
}

TEST_F(Transforms, GridAgreesWithDirectSeriesEvaluation) {
  const SpectralField s = test::random_band(d, 6, 5, 9);
  const GridField g = to_grid(s, d);
  for (int i : {0, 7, 33}) {
    for (int k : {0, 5, 15}) EXPECT_NEAR(g(i, k), evaluate_at(s, d.x(i), d.y(k), d), 1e-12);
  }
}

TEST_F(Transforms, RejectsNonHermitianSpectrum) {
  SpectralField s(d);
  s.at(3, 2) = Complex(1.0, 0.0);
  EXPECT_THROW(to_grid(s, d), InvalidInput);
}

TEST_F(Transforms, RejectsShapeMismatch) {
  const DomainConfig other = plan_domain(2.0, 5.0, 32, 16, 0.5);
  EXPECT_THROW(to_spectral(GridField(other), d), ShapeMismatch);
  EXPECT_THROW(to_grid(SpectralField(other), d), ShapeMismatch);
}

TEST_F(Transforms, SecondYDerivativeOfEigenfunction) {
  SpectralField s(d);
  s.at(0, 1) = 1.0;
  const GridField g = derivative(s, Axis::y, 2, d);
  const double lam = kPi * kPi / (d.L() * d.L());
  const GridField want = test::sample(d, [&](double, double y) { return -lam * std::sin(kPi * y / d.L()); });
  EXPECT_LT(test::max_abs_diff(g, want), 1e-13);
}

TEST_F(Transforms, FirstXDerivativeOfTravelingMode) {
  const double xi1 = kPi / d.X();
  const SpectralField s =
      to_spectral(test::sample(d, [&](double x, double y) { return std::cos(xi1 * x) * std::sin(kPi * y / d.L()); }), d);
  const GridField want =
      test::sample(d, [&](double x, double y) { return -xi1 * std::sin(xi1 * x) * std::sin(kPi * y / d.L()); });
  EXPECT_LT(test::max_abs_diff(derivative(s, Axis::x, 1, d), want), 1e-14);
}

TEST_F(Transforms, OddYDerivativesAreCosineSeriesIncludingWalls) {
  SpectralField s(d);
  s.at(0, 2) = 1.0;
  const double k = 2 * kPi / d.L();
  const GridField dy = derivative(s, Axis::y, 1, d);
  EXPECT_LT(test::max_abs_diff(dy, test::sample(d, [&](double, double y) { return k * std::cos(k * y); })), 1e-13);
  const GridField dy3 = derivative(s, Axis::y, 3, d);
  EXPECT_LT(test::max_abs_diff(dy3, test::sample(d, [&](double, double y) { return -k * k * k * std::cos(k * y); })),
            1e-11);
  const GridField w = partial_derivative_with_walls(s, 0, 1, d);
  for (int i = 0; i < d.nx(); ++i) {
    EXPECT_NEAR(w(i, 0), k, 1e-13);
    EXPECT_NEAR(w(i, d.ny() + 1), k, 1e-13);
  }
}

TEST_F(Transforms, MixedPartialMatchesClosedForm) {
  const double xi = 3 * kPi / d.X();
  const double k = 2 * kPi / d.L();
  const SpectralField s =
      to_spectral(test::sample(d, [&](double x, double y) { return std::sin(xi * x) * std::sin(k * y); }), d);
  // d_x d_y^2 of sin(ξx) sin(ky) = -ξ k^2 cos(ξx) sin(ky)
  const GridField want =
      test::sample(d, [&](double x, double y) { return -xi * k * k * std::cos(xi * x) * std::sin(k * y); });
  EXPECT_LT(test::max_abs_diff(partial_derivative(s, 1, 2, d), want), 1e-13 * want.max_abs());
}

TEST_F(Transforms, DispersiveDerivativesMatchSymbol) {
  const SpectralField s = test::random_band(d, 20, 10, 17);
  const GridField lhs = [&] {
    GridField a = derivative(s, Axis::x, 3, d);
    const GridField b = partial_derivative(s, 1, 2, d);
    for (std::size_t i = 0; i < a.size(); ++i) a.values()[i] += b.values()[i];
    return a;
  }();
  // (d_x^3 + d_x d_y^2) e^{iξx} sin = -i Im m(ξ, λ) e^{iξx} sin
  const SymbolTable S(d);
  SpectralField t = s;
  for (int jx = 0; jx < d.nx(); ++jx) {
    for (int l = 1; l <= d.ny(); ++l) t(jx, l) *= Complex(0.0, -S(jx, l).imag());
  }
  const GridField rhs = to_grid(t, d);
  EXPECT_LT(test::max_abs_diff(lhs, rhs), 1e-11 * rhs.max_abs());
}

TEST_F(Transforms, DerivativesOfRealFieldsStayReal) {
  const SpectralField s = test::random_band(d, 12, 8, 5);
  for (int order = 1; order <= 3; ++order) {
    for (Axis a : {Axis::x, Axis::y}) {
      const SpectralField back = to_spectral(derivative(s, a, order, d), d);
      EXPECT_LT(back.hermitian_defect(), 1e-12 * std::max(1.0, test::max_abs(back)));
    }
  }
}

TEST_F(Transforms, RejectsUnsupportedDerivativeOrder) {
  const SpectralField s(d);
  EXPECT_THROW(derivative(s, Axis::x, 0, d), ConfigError);
  EXPECT_THROW(derivative(s, Axis::y, 4, d), ConfigError);
}

TEST_F(Transforms, DealiasMaskFollowsTwoThirdsRule) {
  SpectralField s = test::random_band(d, 31, 16, 2);
  apply_dealias(s, d);
  for (int jx = 0; jx < d.nx(); ++jx) {
    const int j = d.frequency_index(jx);
    for (int l = 1; l <= d.ny(); ++l) {
      const bool keep = 3 * std::abs(j) < d.nx() && 3 * l < 2 * (d.ny() + 1);
      EXPECT_EQ(d.retained(jx, l), keep);
      if (!keep) { EXPECT_EQ(s(jx, l), Complex{}); }
    }
  }
}

}  // namespace
}  // namespace zkb
