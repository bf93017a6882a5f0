#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "xinu/records.hpp"

namespace {

using namespace xinu;
using nlohmann::json;

template <class T>
T round_trip(const T& x) {
  return json::parse(json(x).dump()).get<T>();
}

// Random doubles across many magnitudes, with the occasional infinity.
double draw(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::uniform_int_distribution<int> expo(-300, 300), pick(0, 19);
  const int k = pick(rng);
  if (k == 0) return std::numeric_limits<double>::infinity();
  if (k == 1) return -std::numeric_limits<double>::infinity();
  if (k == 2) return 0.0;
  return std::ldexp(mant(rng), expo(rng));
}

TEST(Records, JsonRoundTripProperty) {
  std::mt19937_64 rng(20240601);
  std::bernoulli_distribution coin;
  for (int trial = 0; trial < 500; ++trial) {
    const BoundaryRow b{draw(rng), draw(rng), draw(rng), draw(rng)};
    EXPECT_EQ(round_trip(b), b);
    const Table1Row t{"fam" + std::to_string(trial), draw(rng), draw(rng), draw(rng), draw(rng), coin(rng)};
    const Table1Row tt = round_trip(t);
    EXPECT_EQ(tt.family, t.family);
    EXPECT_EQ(tt.parameter, t.parameter);
    EXPECT_EQ(tt.xi, t.xi);
    EXPECT_EQ(tt.nu, t.nu);
    EXPECT_EQ(tt.gap, t.gap);
    EXPECT_EQ(tt.warning, t.warning);
    MeasureRecord m{"m", draw(rng), draw(rng), draw(rng), draw(rng), draw(rng), draw(rng), std::nullopt, std::nullopt};
    if (coin(rng)) m.closed_xi = draw(rng), m.closed_nu = draw(rng);
    EXPECT_EQ(round_trip(m), m);
    const ProfileRow p{draw(rng), draw(rng), draw(rng)};
    EXPECT_EQ(round_trip(p), p);
  }
}

TEST(Records, NanSurvivesAsString) {
  const ProfileRow p{std::nan(""), 0.5, 1.0};
  const json j = p;
  EXPECT_EQ(j["t"], "nan");
  EXPECT_TRUE(std::isnan(round_trip(p).t));
  EXPECT_THROW(json::parse(R"({"t": "x", "v": 1, "h": 1})").get<ProfileRow>(), validation_error);
}

TEST(Records, CsvNumbersUseTwelveSignificantDigits) {
  EXPECT_EQ(csv_number(32.0 / 105.0), "0.304761904762");
  EXPECT_EQ(csv_number(1.0), "1");
  EXPECT_EQ(csv_number(1e-20), "1e-20");
  EXPECT_EQ(csv_number(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(csv_number(-std::numeric_limits<double>::infinity()), "-inf");
}

TEST(Records, BoundaryCsvLayout) {
  const RegionBoundary r = boundary_samples(3);
  std::ostringstream os;
  write_csv(os, boundary_rows(r));
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "b,xi,nu_upper,nu_lower");
  std::getline(is, line);
  EXPECT_EQ(line, "0,0,0,0");
  std::getline(is, line);
  std::getline(is, line);
  EXPECT_EQ(line, "inf,1,1,-1");
}

TEST(Records, CsvIsDeterministic) {
  auto once = [] {
    std::ostringstream os;
    write_csv(os, boundary_rows(boundary_samples(41, Spacing::LogB, {1.0})));
    return os.str();
  };
  EXPECT_EQ(once(), once());
}

TEST(Records, MeasureCsvLeavesClosedFormsBlank) {
  std::ostringstream os;
  write_csv(os, std::vector<MeasureRecord>{{"pi", 0.0, 0.0, 0.0, 0.0, 1e-15, 1e-15, std::nullopt, std::nullopt}});
  EXPECT_EQ(os.str(), "family,parameter,xi,nu,gap,xi_error,nu_error,closed_xi,closed_nu\npi,0,0,0,0,1e-15,1e-15,,\n");
}

}  // namespace
