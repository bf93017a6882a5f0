#include <cmath>

#include <gtest/gtest.h>

#include "xinu/closed_form.hpp"
#include "xinu/measures.hpp"
#include "xinu/optimizer.hpp"

namespace {

using namespace xinu;

class Oracle40 : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dual_ = new QpSolution(solve_dual(problem_));
    oracle_ = new QpSolution(solve_qp_oracle(problem_, 7));
  }
  static void TearDownTestSuite() {
    delete dual_;
    delete oracle_;
  }
  static inline const GridProblem problem_{40, 40, 32.0 / 105.0};
  static inline QpSolution* dual_ = nullptr;
  static inline QpSolution* oracle_ = nullptr;
};

TEST(SolveDual, RecoversBOneAtTheAnchorLevel) {
  const QpSolution s = solve_dual({40, 40, 32.0 / 105.0});
  EXPECT_NEAR(s.b_c(), 1.0, 1e-6);
  EXPECT_NEAR(s.achieved_nu, 76.0 / 105.0, 1e-6);
  EXPECT_FALSE(s.c_clamped);
}

TEST(SolveDual, RecoversHalf) {
  EXPECT_NEAR(solve_dual({40, 40, Xi(0.5)}).b_c(), 0.5, 1e-6);
}

TEST(SolveDual, TinyLevel) {
  const QpSolution s = solve_dual({40, 40, 1e-4});
  EXPECT_LT(s.b_c(), 0.02);
  EXPECT_LT(s.achieved_nu, 0.02);
  EXPECT_GT(s.achieved_nu, 0.0);
}

TEST(SolveDual, LevelsOutsideTheUnitIntervalAreRejected) {
  EXPECT_THROW(solve_dual({40, 40, 0.0}), domain_error);
  EXPECT_THROW(solve_dual({40, 40, 1.0}), domain_error);
  EXPECT_THROW(solve_dual({40, 40, -0.3}), domain_error);
  EXPECT_THROW(solve_dual({0, 40, 0.3}), domain_error);
}

TEST(SolveDual, ExtremeLevelsAreClamped) {
  const QpSolution s = solve_dual({20, 20, 1e-7});
  EXPECT_TRUE(s.c_clamped);
  EXPECT_EQ(s.c, 1e-4);
}

TEST(SolveDual, Invariants) {
  for (double c : {0.05, 32.0 / 105.0, 0.8}) {
    const GridProblem p{40, 40, c};
    const QpSolution s = solve_dual(p);
    for (double h : s.h.data) {
      EXPECT_GE(h, 0.0);
      EXPECT_LE(h, 1.0);
    }
    EXPECT_LE(s.achieved_xi, c + 1e-8);
    EXPECT_LE(s.mu * std::abs(s.achieved_xi - c), 1e-6);
    EXPECT_LE(s.kkt.stationarity, 1e-10);
    EXPECT_LE(s.kkt.marginal, 1e-10);
    EXPECT_LE(s.kkt.complementarity, 1e-10);
    EXPECT_EQ(s.kkt.dual_feasibility, 0.0);
  }
}

TEST(SolveDual, GridXiDecreasesInMu) {
  const GridProblem p{40, 40, 0.3};
  double prev = 2.0;
  for (int k = 0; k < 20; ++k) {
    const double mu = std::pow(10.0, -2.0 + 4.0 * k / 19.0);
    double xi, nu;
    detail::grid_measures(p, dual_candidate(p, mu), xi, nu);
    EXPECT_LT(xi, prev) << mu;
    prev = xi;
  }
}

TEST(SolveDual, GridObjectiveConvergesToTheSectionIntegral) {
  for (auto [n, tol] : {std::pair{40u, 2e-3}, std::pair{80u, 5e-4}}) {
    const QpSolution s = solve_dual({n, n, 32.0 / 105.0});
    const double ref = nu_of_dh1(ExtremalCopula(s.b_c())).value;
    EXPECT_LE(std::abs(s.grid_nu - ref), tol) << n;
  }
}

TEST(KktCheck, CorruptedEntryBreaksComplementarity) {
  const GridProblem p{40, 40, 32.0 / 105.0};
  QpSolution s = solve_dual(p);
  bool flipped = false;
  for (std::size_t i = 0; i < p.n_t && !flipped; ++i)
    for (std::size_t j = 0; j < p.n_v && !flipped; ++j)
      if (s.h(i, j) == 0.0 && s.q[j] - p.x(i) > 0.01) {
        s.h(i, j) = 1.0;
        flipped = true;
      }
  ASSERT_TRUE(flipped);
  EXPECT_GT(kkt_check(s, p).complementarity, 1e-3);
}

TEST_F(Oracle40, MatchesTheDual) {
  EXPECT_NEAR(oracle_->achieved_nu, 76.0 / 105.0, 2e-2);
  EXPECT_LE(l2_distance(problem_, oracle_->h, dual_->h), 5e-2);
  EXPECT_LE(oracle_->achieved_nu, dual_->achieved_nu + 1e-3);
}

TEST_F(Oracle40, KktResidualsSmall) {
  EXPECT_LE(oracle_->kkt.stationarity, 1e-2);
  EXPECT_LE(oracle_->kkt.marginal, 1e-2);
  EXPECT_LE(oracle_->kkt.complementarity, 1e-2);
  EXPECT_LE(oracle_->kkt.dual_feasibility, 1e-2);
}

TEST_F(Oracle40, FeasibleAndSeedIndependent) {
  EXPECT_LE(oracle_->achieved_xi, oracle_->c + 1e-8);
  for (double h : oracle_->h.data) {
    EXPECT_GE(h, 0.0);
    EXPECT_LE(h, 1.0);
  }
  const QpSolution other = solve_qp_oracle(problem_, 12345);
  EXPECT_NEAR(other.achieved_nu, oracle_->achieved_nu, 1e-6);
}

TEST_F(Oracle40, RowsIncreaseInVWithoutBeingForced) {
  double worst = 0.0;
  for (std::size_t i = 0; i < problem_.n_t; ++i)
    for (std::size_t j = 0; j + 1 < problem_.n_v; ++j)
      worst = std::max(worst, oracle_->h(i, j) - oracle_->h(i, j + 1));
  EXPECT_LE(worst, 1e-3);
}

TEST(SolveQpOracle, RejectsLargeGrids) {
  EXPECT_THROW(solve_qp_oracle({200, 200, 0.3}), domain_error);
}

TEST(SolveQpOracle, ReducedGrid) {
  const GridProblem p{24, 24, 32.0 / 105.0};
  const QpSolution o = solve_qp_oracle(p, 3);
  const QpSolution d = solve_dual(p);
  const double scale = 40.0 / 24.0;
  EXPECT_NEAR(o.achieved_nu, 76.0 / 105.0, 2e-2 * scale);
  EXPECT_LE(l2_distance(p, o.h, d.h), 5e-2 * scale);
}

}  // namespace
