#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "geocascade/geometry.hpp"
#include "geocascade/random.hpp"
#include "oracles.hpp"

using namespace geocascade;
constexpr double kPi = std::numbers::pi;

TEST(LensArea, CoincidentCircles) { EXPECT_NEAR(lens_area(0.0, 0.1, 0.1), kPi * 0.01, 1e-15); }

TEST(LensArea, DisjointCircles) {
  EXPECT_EQ(lens_area(0.3, 0.1, 0.1), 0.0);
  EXPECT_EQ(lens_area(0.2, 0.1, 0.1), 0.0);  // tangent
}

TEST(LensArea, ContainmentUsesSmallerCircle) {
  EXPECT_NEAR(lens_area(0.05, 0.2, 0.1), kPi * 0.01, 1e-15);
  EXPECT_NEAR(lens_area(0.1, 0.1, 0.2), kPi * 0.01, 1e-15);  // internally tangent
}

TEST(LensArea, EqualRadiiAtUnitSeparation) {
  // 2r^2 acos(d/2r) - (d/2) sqrt(4r^2 - d^2) for r = d = 0.1.
  const double expected = 0.02 * std::acos(0.5) - 0.05 * std::sqrt(0.03);
  EXPECT_NEAR(lens_area(0.1, 0.1, 0.1), expected, 1e-15);
  EXPECT_NEAR(lens_area(0.1, 0.1, 0.1), 0.0122837, 5e-8);
}

TEST(LensArea, RejectionSamplingOracle) {
  geocascade::Rng rng(20240901);
  for (int i = 0; i < 10; ++i) {
    const double r1 = 0.05 + 0.15 * rng.uniform();
    const double r2 = 0.05 + 0.15 * rng.uniform();
    const double d = (r1 + r2) * (0.05 + 0.9 * rng.uniform());
    const double exact = lens_area(d, r1, r2);
    const double mc = oracle::lens_area_mc(d, r1, r2, 4'000'000, 1000 + i);
    // three significant digits
    EXPECT_NEAR(mc / exact, 1.0, 5e-3) << "d=" << d << " r1=" << r1 << " r2=" << r2;
  }
}

TEST(LensArea, SymmetricAndMonotone) {
  for (double r1 : {0.03, 0.1, 0.25}) {
    for (double r2 : {0.04, 0.1, 0.3}) {
      double previous = INFINITY;
      for (int k = 0; k <= 200; ++k) {
        const double d = 0.6 * k / 200.0;
        const double a = lens_area(d, r1, r2);
        EXPECT_NEAR(a, lens_area(d, r2, r1), 1e-12 * a + 1e-15);
        EXPECT_LE(a, previous + 1e-15);
        previous = a;
      }
    }
  }
}

TEST(LensArea, ContinuousAtBranchBoundaries) {
  const double r1 = 0.1, r2 = 0.25;
  const double contain = r2 - r1, apart = r1 + r2;
  for (double eps : {1e-6, 1e-9}) {
    EXPECT_NEAR(lens_area(contain + eps, r1, r2), kPi * r1 * r1, 1e-5);
    EXPECT_NEAR(lens_area(apart - eps, r1, r2), 0.0, 1e-7);
  }
}

TEST(LensArea, RejectsNegativeInput) {
  EXPECT_THROW(lens_area(-0.1, 0.1, 0.1), ParameterDomainError);
  EXPECT_THROW(lens_area(0.1, -0.1, 0.1), ParameterDomainError);
  EXPECT_THROW(lens_area(0.1, 0.1, 0.0), ParameterDomainError);
}

TEST(LensArea, CircleOverload) {
  EXPECT_DOUBLE_EQ(lens_area(Circle(0.0, 0.1), Circle(0.1, 0.1)), lens_area(0.1, 0.1, 0.1));
  EXPECT_THROW(Circle(-1.0, 0.1), ParameterDomainError);
  EXPECT_THROW(Circle(0.0, 0.0), ParameterDomainError);
}

TEST(ExteriorArea, AttackInsideNeighborhood) {
  const auto j = exterior_area(0.0, 0.1, 0.05);
  ASSERT_TRUE(j);
  EXPECT_NEAR(*j, kPi * (0.01 - 0.0025), 1e-15);
}

TEST(ExteriorArea, PartialOverlapMatchesLens) {
  const auto j = exterior_area(0.05, 0.1, 0.1);
  ASSERT_TRUE(j);
  EXPECT_NEAR(*j, kPi * 0.01 - lens_area(0.05, 0.1, 0.1), 1e-15);
}

TEST(ExteriorArea, NeighborhoodInsideAttackIsFlagged) {
  EXPECT_FALSE(exterior_area(0.0, 0.05, 0.1).has_value());
  EXPECT_FALSE(exterior_area(0.05, 0.05, 0.1).has_value());  // internally tangent
}

TEST(ExteriorArea, ComplementsLens) {
  for (double r : {0.001, 0.02, 0.05, 0.09}) {
    const auto j = exterior_area(r, 0.1, 0.1);
    ASSERT_TRUE(j);
    EXPECT_NEAR(*j + lens_area(r, 0.1, 0.1), kPi * 0.01, 1e-15);
  }
}

TEST(ExteriorArea, DomainErrors) {
  EXPECT_THROW(exterior_area(0.1, 0.1, 0.1), ParameterDomainError);
  EXPECT_THROW(exterior_area(-0.01, 0.1, 0.1), ParameterDomainError);
}

namespace {
double pdf_integral(double r_v, double R, double Ra) {
  const double lo = distance_support_min(r_v, R);
  std::vector<double> cuts{lo, Ra};
  // split where the density changes branch or has an integrable kink
  for (double c : {R - r_v, r_v - R, Ra - R}) {
    if (c > lo && c < Ra) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  return oracle::simpson_pieces([&](double r) { return distance_pdf(r, r_v, R, Ra); }, cuts, 1e-11);
}
}  // namespace

TEST(DistancePdf, NormalizedOnSampledGeometries) {
  geocascade::Rng rng(77);
  for (int i = 0; i < 10; ++i) {
    const double R = 0.05 + 0.15 * rng.uniform();
    const double Ra = 0.05 + 0.15 * rng.uniform();
    const double r_v = Ra + R * (0.01 + 0.98 * rng.uniform());
    EXPECT_NEAR(pdf_integral(r_v, R, Ra), 1.0, 1e-6) << "r_v=" << r_v << " R=" << R << " Ra=" << Ra;
  }
}

TEST(DistancePdf, NormalizedWhenAttackInsideNeighborhood) {
  EXPECT_NEAR(pdf_integral(0.05, 0.1, 0.02), 1.0, 1e-6);
  EXPECT_NEAR(pdf_integral(0.02, 0.1, 0.02), 1.0, 1e-6);
}

TEST(DistancePdf, ArcBranchWhenNodeOnNeighborhoodCircle) {
  // r_v = R: r + r_v > R for every r > 0, so the density is the arc branch.
  const double R = 0.1, Ra = 0.1, r_v = 0.1;
  const double I = lens_area(r_v, R, Ra);
  for (double r : {0.01, 0.05, 0.09}) {
    const double arc = 2.0 * r * std::acos((r_v * r_v - R * R + r * r) / (2.0 * r_v * r)) / I;
    EXPECT_NEAR(distance_pdf(r, r_v, R, Ra), arc, 1e-12);
  }
}

TEST(DistancePdf, FullCircleBranch) {
  const double R = 0.1, Ra = 0.02, r_v = 0.05;
  const double I = lens_area(r_v, R, Ra);
  EXPECT_NEAR(distance_pdf(0.01, r_v, R, Ra), 2.0 * kPi * 0.01 / I, 1e-12);
}

TEST(DistancePdf, ZeroOutsideSupport) {
  EXPECT_EQ(distance_pdf(0.04, 0.15, 0.1, 0.1), 0.0);
  EXPECT_EQ(distance_pdf(0.11, 0.15, 0.1, 0.1), 0.0);
  EXPECT_THROW(distance_pdf(0.05, 0.05, 0.1, 0.1), ParameterDomainError);
}

TEST(DistancePdf, MatchesLensHistogram) {
  // Chi-square comparison of binned distances of uniform lens samples with
  // the integrated density.
  const double r_v = 0.15, R = 0.1, Ra = 0.1;
  const std::size_t n = 1'000'000;
  const auto samples = oracle::lens_distances(r_v, R, Ra, n, 4242);
  const double lo = r_v - R;
  const int bins = 20;
  std::vector<double> counts(bins, 0.0);
  for (double d : samples) {
    const int b = std::min(bins - 1, int((d - lo) / (Ra - lo) * bins));
    counts[b] += 1.0;
  }
  double chi2 = 0.0;
  for (int b = 0; b < bins; ++b) {
    const double a = lo + (Ra - lo) * b / bins, c = lo + (Ra - lo) * (b + 1) / bins;
    const double p = oracle::simpson([&](double r) { return distance_pdf(r, r_v, R, Ra); }, a, c, 1e-12);
    const double expected = p * double(n);
    chi2 += (counts[b] - expected) * (counts[b] - expected) / expected;
  }
  // 19 degrees of freedom; 99.9% quantile is 43.8.
  EXPECT_LT(chi2, 43.8);

  // point value at r = 0.08 against a narrow bin
  const double h = 0.002;
  double in_bin = 0;
  for (double d : samples) in_bin += (d >= 0.08 - h / 2 && d < 0.08 + h / 2);
  const double density = in_bin / double(n) / h;
  const double se = std::sqrt(in_bin) / double(n) / h;
  EXPECT_NEAR(density, distance_pdf(0.08, r_v, R, Ra), 4.0 * se + 0.01 * density);
}
