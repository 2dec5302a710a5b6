#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>

#include "spacelog/error.hpp"
#include "spacelog/random_scenario.hpp"
#include "spacelog/scenario.hpp"
#include "support/toy.hpp"

namespace spacelog {
namespace {

bool mentions(const std::vector<std::string>& lines, const std::string& what) {
  return std::any_of(lines.begin(), lines.end(), [&](const std::string& l) { return l.find(what) != std::string::npos; });
}

TEST(Lunar, DefaultVariant) {
  const Scenario s = bundled_lunar_scenario();
  EXPECT_TRUE(validate_scenario(s).ok());
  EXPECT_EQ(s.nodes.size(), 5u);
  EXPECT_EQ(s.vehicles.size(), 2u);
  bool out = false, back = false;
  for (const auto& d : s.demands) {
    out = out || (d.node == "Moon" && d.day == 240 && d.commodity == "payload_out" && d.amount == -30000);
    back = back || (d.node == "Earth" && d.day == 360 && d.commodity == "payload_return" && d.amount == -5000);
  }
  EXPECT_TRUE(out);
  EXPECT_TRUE(back);
}

TEST(Lunar, ProductivityScalesAlpha) {
  const Scenario a = bundled_lunar_scenario({3, 120, 1.0, 1.0});
  const Scenario b = bundled_lunar_scenario({3, 120, 1.5, 1.0});
  ASSERT_EQ(a.isru_catalog.size(), b.isru_catalog.size());
  for (std::size_t k = 0; k < a.isru_catalog.size(); ++k) {
    for (const auto& [id, alpha] : a.isru_catalog[k].production) {
      EXPECT_NEAR(b.isru_catalog[k].production.at(id), 1.5 * alpha, 1e-15 * alpha) << id;
    }
  }
}

TEST(Lunar, Variants) {
  for (int missions : {3, 4, 5}) {
    for (double interval : {60.0, 120.0, 240.0}) {
      EXPECT_TRUE(validate_scenario(bundled_lunar_scenario({missions, interval, 1.0, 1.0})).ok());
    }
  }
  for (const LunarVariant& bad : {LunarVariant{2, 120, 1, 1}, LunarVariant{3, 100, 1, 1},
                                  LunarVariant{3, 120, 2, 1}, LunarVariant{3, 120, 1, 1.5}}) {
    try {
      bundled_lunar_scenario(bad);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::kUnknownVariant);
    }
  }
}

TEST(Validation, OffGridDemand) {
  Scenario s = bundled_lunar_scenario();
  s.demands.push_back({"Moon", 100, "payload_out", -1});
  const ValidationResult r = validate_scenario(s);
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(mentions(r.errors, "off-grid time"));
  try {
    require_valid(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kValidationError);
    EXPECT_TRUE(mentions(e.diagnostics(), "off-grid time"));
  }
}

TEST(Validation, MissingVehicleOnEdge) {
  Scenario s = bundled_lunar_scenario();
  s.edges[0].vehicles = {"SC9"};
  const ValidationResult r = validate_scenario(s);
  EXPECT_TRUE(mentions(r.errors, "SC9"));
}

TEST(Validation, CollectsEveryProblem) {
  Scenario s = testing::rocket_toy();
  s.vehicles[0].isp = 0;
  s.edges[0].to = "nowhere";
  s.demands[0].commodity = "unobtainium";
  const ValidationResult r = validate_scenario(s);
  EXPECT_GE(r.errors.size(), 3u);
  EXPECT_TRUE(mentions(r.errors, "nowhere"));
  EXPECT_TRUE(mentions(r.errors, "unobtainium"));
  EXPECT_TRUE(mentions(r.errors, "isp"));
}

TEST(Validation, CapWarning) {
  const ValidationResult r = validate_scenario(bundled_lunar_scenario());
  EXPECT_TRUE(mentions(r.warnings, "capped"));
}

TEST(Json, RoundTrip) {
  for (const Scenario& s : {bundled_lunar_scenario(), testing::site_toy(), testing::rocket_toy(),
                            random_scenario(5), bundled_lunar_scenario({4, 60, 1.25, 0.5})}) {
    const std::string text = scenario_to_json(s);
    const Scenario back = scenario_from_json(text);
    EXPECT_EQ(back, s) << s.name;
    EXPECT_EQ(scenario_to_json(back), text);
  }
}

TEST(Json, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "spacelog_scenario_test.json";
  const Scenario s = bundled_lunar_scenario();
  save_scenario(s, path);
  EXPECT_EQ(load_scenario(path), s);
  std::filesystem::remove(path);
}

TEST(Json, Malformed) {
  try {
    scenario_from_json("{ not json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kParseError);
  }
  EXPECT_THROW(scenario_from_json(R"({"nodes": 3})"), Error);
}

TEST(RandomScenario, ValidAndDeterministic) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Scenario s = random_scenario(seed);
    EXPECT_TRUE(validate_scenario(s).ok()) << seed;
    EXPECT_EQ(s, random_scenario(seed));
    EXPECT_LE(s.nodes.size(), 4u);
    EXPECT_LE(s.grid().size(), 6u);
  }
}

}  // namespace
}  // namespace spacelog
