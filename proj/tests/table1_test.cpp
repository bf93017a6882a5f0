#include <cmath>

#include <gtest/gtest.h>

#include "xinu/region.hpp"
#include "xinu/table1.hpp"

namespace {

using namespace xinu;

double round3(double x) { return std::round(x * 1000.0) / 1000.0; }

TEST(Table1, ExtremalRow) {
  const Table1Row r = extremal_row();
  EXPECT_EQ(r.parameter, 1.0);
  EXPECT_EQ(round3(r.xi), 0.305);
  EXPECT_EQ(round3(r.nu), 0.724);
  EXPECT_EQ(round3(r.gap), 0.419);
  EXPECT_FALSE(r.warning);
}

TEST(Table1, FrankRowMatchesReferenceValues) {
  const FamilyScanResult s = scan_family({Family::Frank, 2.0, 10.0});
  EXPECT_NEAR(s.row.parameter, 5.746, 0.02);
  EXPECT_NEAR(s.row.xi, 0.312, 0.005);
  EXPECT_NEAR(s.row.nu, 0.695, 0.005);
  EXPECT_NEAR(s.row.gap, 0.383, 0.005);
  EXPECT_NEAR(s.row.gap, s.row.nu - s.row.xi, 1e-12);
  EXPECT_FALSE(s.row.warning);
  EXPECT_EQ(s.theta.size(), 61u);
}

TEST(Table1, ClaytonMaximalGap) {
  const FamilyScanResult s = scan_family({Family::Clayton, 0.5, 4.0});
  EXPECT_NEAR(s.row.gap, 0.395, 0.005);
}

// The spline maximizer agrees with a direct golden-section search of the gap.
TEST(Table1, SplineArgmaxAgreesWithDirectSearch) {
  const QuadratureSpec q = table1_quadrature();
  auto gap_at = [&](double th) {
    const MeasurePair m = measures(parametric_copula({Family::Frank, th}), q);
    return m.nu - m.xi;
  };
  const double direct = golden_section_max(gap_at, 4.0, 8.0, 1e-6);
  const FamilyScanResult s = scan_family({Family::Frank, 2.0, 10.0});
  EXPECT_NEAR(s.row.parameter, direct, 2e-3);
  EXPECT_NEAR(s.row.gap, gap_at(direct), 1e-7);
}

TEST(Table1, UnbracketedMaximumRaisesTheWarning) {
  const FamilyScanResult s = scan_family({Family::Frank, 2.0, 4.0, 11});
  EXPECT_TRUE(s.row.warning);
  EXPECT_EQ(s.row.parameter, 4.0);
}

TEST(Table1, BadScansAreRejected) {
  EXPECT_THROW(scan_family({Family::Frank, 2.0, 4.0, 3}), domain_error);
  EXPECT_THROW(scan_family({Family::Frank, 4.0, 2.0}), domain_error);
  EXPECT_THROW(scan_family({Family::Joe, 0.5, 2.0, 11}), domain_error);
}

TEST(Table1, TableQuadratureIsFineEnough) {
  const Copula c = parametric_copula({Family::GumbelHougaard, 2.106});
  const MeasurePair coarse = measures(c, table1_quadrature()), fine = measures(c);
  EXPECT_NEAR(coarse.xi, fine.xi, 1e-9);
  EXPECT_NEAR(coarse.nu, fine.nu, 1e-9);
}

}  // namespace
