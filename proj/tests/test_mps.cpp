#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <set>

#include "spacelog/error.hpp"
#include "spacelog/formulation.hpp"
#include "spacelog/mps.hpp"
#include "spacelog/solver.hpp"
#include "support/oracles.hpp"
#include "support/toy.hpp"

namespace spacelog {
namespace {

TEST(Mps, EmptyModel) {
  const std::string text = export_mps(MilpModel{});
  for (const char* section : {"NAME", "ROWS", "COLUMNS", "RHS", "BOUNDS", "ENDATA"}) {
    EXPECT_NE(text.find(section), std::string::npos) << section;
  }
  const MilpModel back = parse_mps(text);
  EXPECT_EQ(back.rows(), 0);
  EXPECT_EQ(back.cols(), 0);
}

TEST(Mps, RoundTripIsByteIdentical) {
  const Scenario s = testing::site_toy();
  const MilpModel m = build_full_size(s);
  const std::string first = export_mps(m);
  const std::string second = export_mps(parse_mps(first));
  EXPECT_EQ(first, second);
  EXPECT_NE(first.find("INTORG"), std::string::npos);
}

TEST(Mps, ParsedModelSolvesTheSame) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 40; ++trial) {
    MilpModel m = testing::random_model(rng, 3, 6, 2);
    m.objective_offset = 1.25;
    const MilpModel back = parse_mps(export_mps(m));
    ASSERT_EQ(back.cols(), m.cols());
    EXPECT_EQ(back.is_integer, m.is_integer);
    EXPECT_EQ(back.lower, m.lower);
    EXPECT_EQ(back.upper, m.upper);
    const Solution a = solve_reference(m), b = solve_reference(back);
    EXPECT_EQ(a.status, b.status);
    if (a.status == SolveStatus::kOptimal) EXPECT_NEAR(a.objective, b.objective, 1e-9);
  }
}

TEST(Mps, NamesAreSanitizedAndUnique) {
  const MilpModel m = build_full_size(testing::site_toy());
  const auto names = mps_column_names(m);
  std::set<std::string> seen(names.begin(), names.end());
  EXPECT_EQ(seen.size(), names.size());
  for (const auto& n : names) {
    for (char c : n) EXPECT_TRUE(std::isalnum(static_cast<unsigned char>(c)) || c == '_') << n;
  }
}

TEST(Mps, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "spacelog_mps_test.mps";
  const MilpModel m = build_full_size(testing::rocket_toy());
  export_mps(m, path);
  EXPECT_EQ(export_mps(load_mps(path)), export_mps(m));
  std::filesystem::remove(path);
  EXPECT_THROW(load_mps(path), Error);
}

TEST(Mps, RejectsMalformed) {
  EXPECT_THROW(parse_mps("NAME x\nROWS\n N COST\nRANGES\nENDATA\n"), Error);
  EXPECT_THROW(parse_mps("NAME x\nROWS\n Q R0\nENDATA\n"), Error);
}

}  // namespace
}  // namespace spacelog
