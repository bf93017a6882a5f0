#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "xinu/extremal.hpp"
#include "xinu/gauss_legendre.hpp"

namespace {

using namespace xinu;

TEST(Phi, Anchors) {
  for (double b : {0.25, 1.0, 4.0, 30.0}) {
    EXPECT_NEAR(phi(b, -1.0 / b), 1.0, 1e-15) << b;
    EXPECT_NEAR(phi(b, 1.0), 0.0, 1e-15) << b;
  }
  EXPECT_NEAR(phi(1.0, 0.0), 1.0 / 3.0, 1e-15);
}

TEST(Phi, OutsideRangeIsDomainError) {
  EXPECT_THROW(phi(2.0, -0.6), domain_error);
  EXPECT_THROW(phi(2.0, 1.1), domain_error);
}

TEST(Phi, StrictlyDecreasing) {
  for (double b : {0.25, 1.0, 4.0}) {
    double prev = 2.0;
    for (int k = 0; k < 50; ++k) {
      const double q = -1.0 / b + (1.0 + 1.0 / b) * k / 49.0;
      const double p = phi(b, q);
      EXPECT_LT(p, prev) << b << " " << q;
      prev = p;
    }
  }
}

// Quadrature of the clamped parabola checks all three section integrals in every regime.
TEST(SectionIntegrals, MatchQuadratureInEveryRegime) {
  const auto rule = gauss_legendre(20);
  for (double b : {0.5, 1.0, 5.0})
    for (int k = 0; k <= 40; ++k) {
      const double q = -1.0 / b + (1.0 + 1.0 / b) * k / 40.0;
      const Regime g = classify_regime(b, q);
      const std::vector<double> kinks{g.a, g.s};
      const auto e = panel_edges(0.0, 1.0, 4, kinks);
      auto h = [&](double t) { return std::clamp(b * ((1 - t) * (1 - t) - q), 0.0, 1.0); };
      const SectionIntegrals s = section_integrals(b, q);
      EXPECT_NEAR(s.marginal, integrate(rule, e, h), 1e-14);
      EXPECT_NEAR(s.square, integrate(rule, e, [&](double t) { return h(t) * h(t); }), 1e-14);
      EXPECT_NEAR(s.weighted, integrate(rule, e, [&](double t) { return (1 - t) * (1 - t) * h(t); }), 1e-14);
    }
}

TEST(SectionIntegrals, UnclampedExamples) {
  const SectionIntegrals s = section_integrals(1.0, 0.0);
  EXPECT_NEAR(s.marginal, phi(1.0, 0.0), 0.0);
  EXPECT_NEAR(s.square, 0.2, 1e-15);
  EXPECT_NEAR(s.weighted, 0.2, 1e-15);
}

TEST(ClassifyRegime, Examples) {
  EXPECT_EQ(classify_regime(0.5, -1.0).tag, RegimeTag::Unclamped);  // R = 1 exactly
  EXPECT_EQ(classify_regime(5.0, 0.5).tag, RegimeTag::DoubleClamped);
  EXPECT_EQ(classify_regime(2.0, 0.9).tag, RegimeTag::LowerClamped);
  EXPECT_EQ(classify_regime(2.0, 0.5).tag, RegimeTag::LowerClamped);
  EXPECT_EQ(classify_regime(2.0, -0.2).tag, RegimeTag::UpperClamped);
}

TEST(ClassifyRegime, SwitchingData) {
  const Regime g = classify_regime(5.0, 0.25);
  EXPECT_NEAR(g.R, std::sqrt(0.45), 1e-15);
  EXPECT_NEAR(g.r, 0.5, 1e-15);
  EXPECT_NEAR(g.x_a, std::sqrt(0.45), 1e-15);
  EXPECT_NEAR(g.a, 1.0 - std::sqrt(0.45), 1e-15);
  EXPECT_NEAR(g.s, 0.5, 1e-15);
}

TEST(SolveQ, EndpointsAndKnownValue) {
  for (double b : {0.3, 1.0, 8.0}) {
    EXPECT_EQ(solve_q(b, 0.0), 1.0);
    EXPECT_EQ(solve_q(b, 1.0), -1.0 / b);
  }
  EXPECT_NEAR(solve_q(1.0, 1.0 / 3.0), 0.0, 1e-12);
}

TEST(SolveQ, RoundTrip) {
  for (double b : {0.01, 0.25, 1.0, 4.0, 100.0, 1e4, 1e6})
    for (int k = 1; k < 40; ++k) {
      const double v = k / 40.0;
      EXPECT_LE(std::abs(phi(b, solve_q(b, v)) - v), 1e-12) << b << " " << v;
    }
}

// Thin double-clamped slivers: Phi must not lose digits to cancellation.
TEST(Phi, ThinSliverMatchesDirectIntegral) {
  const double b = 1e5, q = 0.95062;
  // (1 - R) + int_r^R b(x^2 - q) dx, naively but in long double
  const long double lq = q, lb = b;
  const long double lr = std::sqrt(lq), lR = std::sqrt(lq + 1.0L / lb);
  const long double ref = (1.0L - lR) + lb * ((lR * lR * lR - lr * lr * lr) / 3.0L - lq * (lR - lr));
  EXPECT_NEAR(phi(b, q), static_cast<double>(ref), 1e-13);
}

TEST(HSection, Examples) {
  for (double t : {0.0, 0.2, 0.5, 0.9, 1.0}) EXPECT_NEAR(h_section(1.0, t, 1.0 / 3.0), (1 - t) * (1 - t), 1e-12);
  for (double b : {0.3, 1.0, 6.0}) {
    EXPECT_EQ(h_section(b, 0.0, 1.0), 1.0);
    EXPECT_EQ(h_section(b, 1.0, 0.0), 0.0);
  }
  EXPECT_THROW(h_section(0.0, 0.5, 0.5), domain_error);
}

TEST(HSection, NegativeBIsReflected) {
  for (double b : {0.5, 3.0})
    for (double t : {0.1, 0.6})
      for (double v : {0.2, 0.7}) EXPECT_NEAR(h_section(-b, t, v), 1.0 - h_section(b, t, 1.0 - v), 1e-15);
}

TEST(HSection, StochasticallyIncreasing) {
  for (double b : {0.5, 1.0, 5.0}) {
    const ExtremalCopula c(b);
    for (int i = 0; i < 50; ++i) {
      const double t = i / 49.0;
      double prev = -1.0;
      for (int j = 0; j < 50; ++j) {
        const double h = c.h(t, j / 49.0);
        EXPECT_GE(h, prev) << b << " " << t;
        EXPECT_GE(h, 0.0);
        EXPECT_LE(h, 1.0);
        prev = h;
      }
    }
  }
}

TEST(ExtremalCdf, Marginals) {
  for (double b : {0.5, 2.0, -3.0})
    for (double x : {0.0, 0.13, 0.5, 0.91, 1.0}) {
      EXPECT_NEAR(extremal_cdf(b, 1.0, x), x, 1e-12) << b;
      EXPECT_NEAR(extremal_cdf(b, x, 1.0), x, 1e-12) << b;
      EXPECT_NEAR(extremal_cdf(b, x, 0.0), 0.0, 1e-12) << b;
    }
  EXPECT_THROW(extremal_cdf(0.0, 0.5, 0.5), domain_error);
}

TEST(ExtremalCdf, TwoIncreasing) {
  const int n = 33;
  for (double b : {0.5, 1.0, 5.0, -1.0, -5.0}) {
    const ExtremalCopula c(b);
    double worst = 0.0;
    for (int i = 0; i + 1 < n; ++i)
      for (int j = 0; j + 1 < n; ++j) {
        const double u1 = i / double(n - 1), u2 = (i + 1) / double(n - 1);
        const double v1 = j / double(n - 1), v2 = (j + 1) / double(n - 1);
        worst = std::min(worst, c.cdf(u2, v2) - c.cdf(u1, v2) - c.cdf(u2, v1) + c.cdf(u1, v1));
      }
    EXPECT_GE(worst, -1e-12) << b;
  }
}

TEST(ExtremalCdf, ReflectionIsExact) {
  for (double b : {0.5, 1.0, 5.0})
    for (int i = 0; i <= 20; ++i)
      for (int j = 0; j <= 20; ++j) {
        const double u = i / 20.0, v = j / 20.0;
        EXPECT_EQ(extremal_cdf(-b, u, v), u - extremal_cdf(b, u, 1.0 - v));
      }
}

TEST(ExtremalCdf, DerivativeInUIsTheSection) {
  const ExtremalCopula c(2.5);
  for (double u : {0.1, 0.4, 0.8})
    for (double v : {0.15, 0.5, 0.85}) {
      const double h = 1e-6;
      EXPECT_NEAR((c.cdf(u + h, v) - c.cdf(u - h, v)) / (2 * h), c.h(u, v), 1e-8);
    }
}

TEST(ExtremalCopula, CachedAndDirectAgree) {
  for (double b : {0.2, 1.0, 7.0}) {
    const ExtremalCopula cached(b), direct(b, {.cache_points = 0});
    for (int k = 0; k <= 97; ++k) {
      const double v = k / 97.0;
      // both solve Phi(q) = v to the 1e-12 solver tolerance, from different brackets
      EXPECT_NEAR(cached.cdf(0.37, v), direct.cdf(0.37, v), 2e-12);
      EXPECT_NEAR(cached.h(0.61, v), direct.h(0.61, v), 1e-10);
    }
  }
}

TEST(ExtremalCopula, LimitsUseReferenceSections) {
  EXPECT_EQ(ExtremalCopula(2e8).limit(), ExtremalCopula::Limit::Comonotone);
  EXPECT_EQ(ExtremalCopula(-2e8).limit(), ExtremalCopula::Limit::Countermonotone);
  EXPECT_EQ(ExtremalCopula(1e-9).limit(), ExtremalCopula::Limit::Independence);
  EXPECT_DOUBLE_EQ(ExtremalCopula(2e8).cdf(0.3, 0.7), 0.3);
  EXPECT_DOUBLE_EQ(ExtremalCopula(-2e8).cdf(0.3, 0.6), 0.0);
  EXPECT_DOUBLE_EQ(ExtremalCopula(1e-9).cdf(0.5, 0.5), 0.25);
}

TEST(ConditionalProfile, Examples) {
  const auto p = conditional_profile(1.0, 1.0 / 3.0, 3);
  ASSERT_EQ(p.size(), 3u);
  EXPECT_NEAR(p[0].h, 1.0, 1e-12);
  EXPECT_NEAR(p[1].h, 0.25, 1e-12);
  EXPECT_NEAR(p[2].h, 0.0, 1e-12);
  EXPECT_EQ(p[1].t, 0.5);
  for (const auto& x : conditional_profile(3.0, 1.0, 11)) EXPECT_EQ(x.h, 1.0);
  for (const auto& x : conditional_profile(3.0, 0.0, 11)) EXPECT_EQ(x.h, 0.0);
}

TEST(ConditionalProfile, RegimeShapes) {
  auto count = [](const std::vector<ProfilePoint>& p, double level) {
    int n = 0;
    for (std::size_t i = 1; i + 1 < p.size(); ++i) n += p[i].h == level;
    return n;
  };
  const auto upper = conditional_profile(0.5, 0.9, 401);
  EXPECT_EQ(upper.front().h, 1.0);
  EXPECT_GT(count(upper, 1.0), 0);
  EXPECT_EQ(count(upper, 0.0), 0);

  const auto both = conditional_profile(5.0, 0.5, 401);
  EXPECT_GT(count(both, 1.0), 0);
  EXPECT_GT(count(both, 0.0), 0);

  const auto open = conditional_profile(0.5, 0.5, 401);
  EXPECT_EQ(count(open, 1.0), 0);
  EXPECT_EQ(count(open, 0.0), 0);
}

}  // namespace
