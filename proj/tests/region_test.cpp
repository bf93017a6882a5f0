#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "xinu/closed_form.hpp"
#include "xinu/region.hpp"

namespace {

using namespace xinu;

TEST(XiInverse, Examples) {
  EXPECT_NEAR(xi_inverse(32.0 / 105.0), 1.0, 1e-9);
  EXPECT_NEAR(xi_inverse(11.0 / 105.0), 0.5, 1e-9);
  EXPECT_NEAR(xi_inverse(Xi(7.3)), 7.3, 1e-8);
  EXPECT_THROW(xi_inverse(0.0), domain_error);
  EXPECT_THROW(xi_inverse(1.0), domain_error);
}

TEST(XiInverse, RoundTripOnLogGrid) {
  for (int k = 0; k < 50; ++k) {
    const double b = std::pow(10.0, -3.0 + 6.0 * k / 49.0);
    EXPECT_NEAR(xi_inverse(Xi(b)) / b, 1.0, 1e-8) << b;
    EXPECT_LE(std::abs(Xi(xi_inverse(Xi(b))) - Xi(b)), 1e-12);
  }
}

TEST(XiInverse, WithinClampsToTheBracket) {
  const XiInverse lo = xi_inverse_within(1e-30, 1e-8, 1e8);
  EXPECT_TRUE(lo.clamped);
  EXPECT_EQ(lo.b, 1e-8);
  const XiInverse mid = xi_inverse_within(0.5, 1e-8, 1e8);
  EXPECT_FALSE(mid.clamped);
  EXPECT_NEAR(Xi(mid.b), 0.5, 1e-12);
}

TEST(Psi, EndpointsAndAnchor) {
  EXPECT_EQ(psi(0.0), 0.0);
  EXPECT_EQ(psi(1.0), 1.0);
  EXPECT_NEAR(psi(32.0 / 105.0), 76.0 / 105.0, 1e-12);
}

TEST(Psi, StrictlyConcave) {
  const int n = 200;
  std::vector<double> y(n);
  for (int k = 0; k < n; ++k) y[k] = psi(k / double(n - 1));
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 0; k + 1 < n; ++k) {
    const double slope = (y[k + 1] - y[k]) * (n - 1);
    EXPECT_LT(slope, prev) << k;
    prev = slope;
  }
  for (int k = 1; k + 1 < n; ++k) EXPECT_LE(y[k + 1] - 2 * y[k] + y[k - 1], 1e-9);
}

TEST(Psi, SlopeIsOneOverB) {
  for (int k = 1; k <= 20; ++k) {
    const double x = k / 21.0, h = 1e-6 * std::min(x, 1 - x);
    const double fd = (psi(x + h) - psi(x - h)) / (2 * h);
    EXPECT_NEAR(fd * xi_inverse(x), 1.0, 1e-5) << x;
  }
}

TEST(Contains, Examples) {
  EXPECT_EQ(contains(0.5, 0.0, 1e-9), Membership::Inside);
  EXPECT_EQ(contains(1.0, -1.0, 1e-9), Membership::Boundary);
  EXPECT_EQ(contains(0.0, 0.5, 1e-9), Membership::Outside);
  EXPECT_EQ(contains(1.0, 0.3, 1e-9), Membership::Boundary);
  EXPECT_EQ(contains(1.2, 0.0, 1e-9), Membership::Outside);
  EXPECT_EQ(contains(-0.1, 0.0, 1e-9), Membership::Outside);
}

TEST(Contains, AttainedExtremes) {
  for (double b : {0.5, 1.0, 5.0}) {
    EXPECT_EQ(contains(Xi(b), N(b)), Membership::Boundary) << b;
    EXPECT_EQ(contains(Xi(b), -N(b)), Membership::Boundary) << b;
    EXPECT_EQ(contains(Xi(b), N(b) + 1e-4), Membership::Outside) << b;
    EXPECT_EQ(contains(Xi(b), N(b) - 1e-4), Membership::Inside) << b;
  }
}

TEST(Contains, SymmetricInNu) {
  for (double x = 0.0; x <= 1.0; x += 0.05)
    for (double y = -1.1; y <= 1.1; y += 0.1) EXPECT_EQ(contains(x, y), contains(x, -y)) << x << " " << y;
}

TEST(BoundarySamples, ThreeUniformSamples) {
  const RegionBoundary r = boundary_samples(3);
  ASSERT_EQ(r.samples.size(), 3u);
  EXPECT_EQ(r.samples[0].xi, 0.0);
  EXPECT_NEAR(r.samples[1].xi, 0.5, 1e-12);
  EXPECT_EQ(r.samples[2].xi, 1.0);
  EXPECT_NEAR(r.samples[1].nu, psi(0.5), 1e-12);
  EXPECT_EQ(r.segment_x, 1.0);
  EXPECT_EQ(r.segment_lo, -1.0);
}

TEST(BoundarySamples, MonotoneAndOnTheBoundary) {
  for (Spacing s : {Spacing::UniformXi, Spacing::LogB}) {
    const RegionBoundary r = boundary_samples(101, s, {0.5, 1.0, 5.0});
    for (std::size_t k = 1; k < r.samples.size(); ++k) {
      EXPECT_GT(r.samples[k].xi, r.samples[k - 1].xi);
      EXPECT_GT(r.samples[k].nu, r.samples[k - 1].nu);
    }
    for (const auto& p : r.samples) {
      EXPECT_EQ(contains(p.xi, p.nu, 1e-9), Membership::Boundary) << p.b;
      if (p.b > 0 && std::isfinite(p.b)) {
        EXPECT_GT(p.nu, p.xi) << p.b;
      }
    }
  }
}

TEST(BoundarySamples, AnchorRowPresent) {
  const RegionBoundary r = boundary_samples(101, Spacing::UniformXi, {1.0});
  bool found = false;
  for (const auto& p : r.samples)
    if (p.b == 1.0) found = std::abs(p.nu - 76.0 / 105.0) <= 1e-9;
  EXPECT_TRUE(found);
}

TEST(MaxGap, ClosedFormAndSearch) {
  const MaxGap g = max_gap_point();
  EXPECT_EQ(g.b, 1.0);
  EXPECT_NEAR(g.gap, 44.0 / 105.0, 1e-15);
  EXPECT_NEAR(g.search_b, 1.0, 1e-6);
  EXPECT_NEAR(std::round(g.xi * 1000) / 1000, 0.305, 1e-12);
  EXPECT_NEAR(std::round(g.nu * 1000) / 1000, 0.724, 1e-12);
}

TEST(GoldenSection, FindsInteriorMaximum) {
  EXPECT_NEAR(golden_section_max([](double t) { return -(t - 0.3) * (t - 0.3); }, 0.0, 1.0), 0.3, 1e-7);
  EXPECT_NEAR(golden_section_max([](double t) { return std::sin(t); }, 0.0, 3.0), M_PI / 2, 1e-7);
}

}  // namespace
