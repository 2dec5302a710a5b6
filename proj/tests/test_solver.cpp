#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "spacelog/error.hpp"
#include "spacelog/formulation.hpp"
#include "spacelog/solver.hpp"
#include "support/oracles.hpp"
#include "support/toy.hpp"

namespace spacelog {
namespace {

TEST(Simplex, SingleBound) {
  ModelBuilder b;
  b.add_column(1, 0, kInf, false);
  b.add_row(RowSense::kGe, 3, {{0, 1}});
  const Solution s = solve_reference(std::move(b).finish("x>=3"));
  ASSERT_EQ(s.status, SolveStatus::kOptimal);
  EXPECT_NEAR(s.objective, 3.0, 1e-12);
}

TEST(Simplex, InfeasibleAndUnbounded) {
  ModelBuilder b;
  b.add_column(1, 0, 1, false);
  b.add_row(RowSense::kGe, 3, {{0, 1}});
  EXPECT_EQ(solve_lp(std::move(b).finish("inf")).status, SolveStatus::kInfeasible);
  ModelBuilder u;
  u.add_column(-1, 0, kInf, false);
  u.add_column(0, 0, kInf, false);
  u.add_row(RowSense::kLe, 1, {{0, 1}, {1, -1}});
  EXPECT_EQ(solve_lp(std::move(u).finish("unb")).status, SolveStatus::kUnbounded);
}

TEST(Simplex, EmptyModel) {
  MilpModel m;
  m.objective_offset = 4.0;
  const Solution s = solve_reference(m);
  EXPECT_EQ(s.status, SolveStatus::kOptimal);
  EXPECT_EQ(s.objective, 4.0);
}

TEST(Simplex, MatchesVertexOracleAndDuality) {
  std::mt19937_64 rng(21);
  int optimal = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int rows = std::uniform_int_distribution<int>(1, 5)(rng);
    const int cols = std::uniform_int_distribution<int>(1, 6)(rng);
    const MilpModel m = testing::random_model(rng, rows, cols, 0);
    const auto oracle = testing::vertex_oracle(m);
    const Solution s = solve_lp(m);
    if (!oracle.feasible) {
      EXPECT_EQ(s.status, SolveStatus::kInfeasible) << trial;
      continue;
    }
    ASSERT_EQ(s.status, SolveStatus::kOptimal) << trial;
    EXPECT_NEAR(s.objective, oracle.objective, 1e-7 * std::max(1.0, std::fabs(oracle.objective))) << trial;
    EXPECT_NEAR(dual_objective(m, s), s.objective, 1e-7 * std::max(1.0, std::fabs(s.objective))) << trial;
    EXPECT_TRUE(check_solution(m, s.values).pass);
    ++optimal;
  }
  EXPECT_GT(optimal, 150);
}

TEST(BranchAndBound, MatchesEnumeration) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 150; ++trial) {
    const int ints = std::uniform_int_distribution<int>(1, 3)(rng);
    const MilpModel m = testing::random_model(rng, std::uniform_int_distribution<int>(1, 4)(rng), 6, ints);
    const auto oracle = testing::enumeration_oracle(m);
    const Solution s = solve_reference(m);
    if (!oracle.feasible) {
      EXPECT_EQ(s.status, SolveStatus::kInfeasible) << trial;
      continue;
    }
    ASSERT_EQ(s.status, SolveStatus::kOptimal) << trial;
    EXPECT_NEAR(s.objective, oracle.objective, 1e-6 * std::max(1.0, std::fabs(oracle.objective))) << trial;
    EXPECT_LE(s.bound, s.objective + 1e-9);
    EXPECT_TRUE(check_solution(m, s.values).pass);
    // The incumbent never beats the root relaxation.
    EXPECT_GE(s.objective, solve_lp(m).objective - 1e-7);
  }
}

TEST(BranchAndBound, Deterministic) {
  std::mt19937_64 rng(8);
  const MilpModel m = testing::random_model(rng, 4, 8, 3);
  const Solution a = solve_reference(m), b = solve_reference(m);
  EXPECT_EQ(a.status, b.status);
  EXPECT_EQ(a.objective, b.objective);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.nodes, b.nodes);
}

TEST(BranchAndBound, NodeLimit) {
  const Scenario s = testing::site_toy();
  SolveLimits lim;
  lim.max_nodes = 1;
  const Solution sol = solve_reference(build_full_size(s), lim);
  EXPECT_TRUE(sol.status == SolveStatus::kLimit || sol.status == SolveStatus::kOptimal);
}

TEST(Checker, Verdicts) {
  std::mt19937_64 rng(2);
  MilpModel m = testing::random_model(rng, 3, 3, 0);
  for (std::size_t i = 0; i < m.rhs.size(); ++i) {
    m.sense[i] = RowSense::kLe;
    m.rhs[i] = std::fabs(m.rhs[i]);
  }
  EXPECT_TRUE(check_solution(m, std::vector<double>(3, 0.0)).pass);
  try {
    check_solution(m, {1.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kDimensionMismatch);
  }
  ModelBuilder b;
  b.add_column(0, 0, 10, true);
  const MilpModel im = std::move(b).finish("int");
  const auto frac = check_solution(im, {0.5});
  EXPECT_FALSE(frac.pass);
  EXPECT_EQ(frac.worst_integer_column, 0);
  EXPECT_FALSE(check_solution(im, {11}).pass);
}

TEST(Checker, FlagsCapacityViolation) {
  // Ship 1001 kg, then check that plan against a vehicle rated for 1000 kg.
  Scenario roomy = testing::rocket_toy(1001.0, 1000.0);
  roomy.vehicles[0].payload_capacity = 1001.0;
  Scenario tight = roomy;
  tight.vehicles[0].payload_capacity = 1000.0;
  const MilpModel m_roomy = build_full_size(roomy);
  const MilpModel m_tight = build_full_size(tight);
  const Solution sol = solve_reference(m_roomy);
  ASSERT_EQ(sol.status, SolveStatus::kOptimal);
  ASSERT_TRUE(check_solution(m_roomy, sol.values).pass);
  const FeasibilityReport r = check_solution(m_tight, sol.values);
  EXPECT_FALSE(r.pass);
  ASSERT_GE(r.worst_row, 0);
  EXPECT_EQ(m_tight.row_meta[static_cast<std::size_t>(r.worst_row)].label, "payload");
  EXPECT_NEAR(r.max_row_violation, 1.0, 1e-9);
}

TEST(ExternalProtocol, Parse) {
  ModelBuilder b;
  b.add_column(1, 0, 5, false);
  b.add_column(2, 0, 5, true);
  MilpModel m = std::move(b).finish("m");
  m.col_names = {"x", "y"};
  const Solution s = parse_external_output(m, "STATUS optimal\nOBJ 7.5\nVAR x 1.5\nVAR y 3\n");
  EXPECT_EQ(s.status, SolveStatus::kOptimal);
  EXPECT_EQ(s.objective, 7.5);
  EXPECT_EQ(s.values, (std::vector<double>{1.5, 3}));
  EXPECT_EQ(parse_external_output(m, "STATUS infeasible\n").status, SolveStatus::kInfeasible);
  EXPECT_THROW(parse_external_output(m, "garbage\n"), Error);
  EXPECT_EQ(status_from_name(status_name(SolveStatus::kLimit)), SolveStatus::kLimit);
}

}  // namespace
}  // namespace spacelog
