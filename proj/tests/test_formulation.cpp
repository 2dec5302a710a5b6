#include <gtest/gtest.h>

#include <cmath>

#include "spacelog/error.hpp"
#include "spacelog/formulation.hpp"
#include "spacelog/packing.hpp"
#include "spacelog/solver.hpp"
#include "support/toy.hpp"

namespace spacelog {
namespace {

using testing::counting_toy;
using testing::holdover_toy;
using testing::rocket_toy;
using testing::site_toy;

double bundle_share(const PrefixedRatios& r, const std::string& prefix) {
  double total = 0.0;
  for (const auto& [id, f] : r.bundles.at(0).fractions) {
    if (id.rfind(prefix, 0) == 0) total += f;
  }
  return total;
}

TEST(FullSize, SingleNodeHoldover) {
  const MilpModel m = build_full_size(holdover_toy());
  ASSERT_EQ(m.cols(), 1);
  const Solution sol = solve_reference(m);
  ASSERT_EQ(sol.status, SolveStatus::kOptimal);
  EXPECT_EQ(sol.objective, 0.0);
  EXPECT_NEAR(sol.values[0], 5.0, 1e-9);
}

TEST(FullSize, RocketEquation) {
  for (double cargo : {1.0, 250.0}) {
    const double dry = 1000.0, phi = 0.5;
    const MilpModel m = build_full_size(rocket_toy(cargo, dry));
    const Solution sol = solve_reference(m);
    ASSERT_EQ(sol.status, SolveStatus::kOptimal);
    const double prop = phi * (cargo + dry) / (1.0 - phi);
    // IMLEO counts cargo, propellant and the vehicle's dry mass.
    EXPECT_NEAR(sol.objective, cargo + prop + dry, 1e-6 * (cargo + prop + dry));
    const auto cols = column_index(m);
    const auto& graph = compile_scenario(rocket_toy(cargo, dry)).graph;
    for (std::size_t a = 0; a < graph.arcs().size(); ++a) {
      if (graph.arcs()[a].is_holdover()) continue;
      EXPECT_NEAR(sol.values[static_cast<std::size_t>(cols.at({static_cast<int>(a), 1}))], prop, 1e-6 * prop);
    }
  }
}

TEST(FullSize, CountsByHand) {
  // 3 departures + 2 nodes x 3 holdovers = 9 arcs, 3 commodities each.
  const MilpModel m = build_full_size(counting_toy());
  const ModelStats st = model_stats(m);
  EXPECT_EQ(st.columns, 27);
  EXPECT_EQ(st.integer_columns, 9);
  const CompiledScenario cs = compile_scenario(counting_toy());
  std::size_t expected = 0;
  for (const auto& a : cs.arcs) expected += a.commodities.size();
  EXPECT_EQ(static_cast<std::size_t>(m.cols()), expected);
  EXPECT_EQ(model_stats(MilpModel{}), ModelStats{});
}

TEST(FullSize, ClosedWindowsBoundToZero) {
  Scenario s = counting_toy();
  s.edges[0].windows = {{1, 1}};
  const CompiledScenario cs = compile_scenario(s);
  const MilpModel m = assemble_model(cs);
  for (int j = 0; j < m.cols(); ++j) {
    const Arc& arc = cs.graph.arcs()[static_cast<std::size_t>(m.col_meta[static_cast<std::size_t>(j)].arc)];
    if (!arc.is_holdover() && !arc.window_open) EXPECT_EQ(m.upper[static_cast<std::size_t>(j)], 0.0);
  }
  // Only the departure at step 1 remains; the cargo still reaches B by step 3.
  const Solution sol = solve_reference(m);
  ASSERT_EQ(sol.status, SolveStatus::kOptimal);
  EXPECT_NEAR(sol.objective, 2002.0, 1e-6);
}

TEST(FullSize, NoOpenWindowIsInfeasible) {
  Scenario s = counting_toy();
  s.edges[0].windows.clear();
  EXPECT_EQ(solve_reference(build_full_size(s)).status, SolveStatus::kInfeasible);
}

TEST(FullSize, InvalidScenarioThrows) {
  Scenario s = rocket_toy();
  s.demands[0].day = 0.5;
  try {
    build_full_size(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kInvalidScenario);
  }
}

TEST(FullSize, DumpingNeverRaisesCost) {
  // Mass-balance rows are <=: adding a supply can only help.
  Scenario s = site_toy(false);
  const double base = solve_reference(build_full_size(s)).objective;
  s.demands.push_back({"S", 10, "O2", 500});
  EXPECT_LE(solve_reference(build_full_size(s)).objective, base + 1e-6);
}

TEST(Prefixed, SingleSubsystemBundle) {
  Scenario s = site_toy(false);
  s.sites[0].power.clear();
  s.power_catalog.clear();
  s.commodities.erase(s.commodities.begin() + 3);
  s.unbounded_supplies[0].commodities = {"O2", "plant", "spares", "V"};
  const PrefixedRatios r = derive_prefixed_ratios(s);
  ASSERT_EQ(r.bundles.size(), 1u);
  ASSERT_EQ(r.bundles[0].fractions.size(), 1u);
  EXPECT_EQ(r.bundles[0].fractions[0].second, 1.0);
  const Solution pf = solve_reference(build_prefixed(s, r));
  const Solution fs = solve_reference(build_full_size(s));
  ASSERT_EQ(pf.status, SolveStatus::kOptimal);
  EXPECT_NEAR(pf.objective, fs.objective, 1e-6 * fs.objective);
}

TEST(Prefixed, LongerIntervalStoresMore) {
  const auto r120 = derive_prefixed_ratios(bundled_lunar_scenario({3, 120, 1.0, 1.0}));
  const auto r240 = derive_prefixed_ratios(bundled_lunar_scenario({3, 240, 1.0, 1.0}));
  EXPECT_GT(bundle_share(r240, "storage_"), bundle_share(r120, "storage_"));
  double total = 0.0;
  for (const auto& [id, f] : r120.bundles[0].fractions) {
    EXPECT_GE(f, 0.0);
    total += f;
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Prefixed, UpperBoundsFullSize) {
  for (bool tank : {false, true}) {
    const Scenario s = site_toy(tank);
    const Solution pf = solve_reference(build_prefixed(s, derive_prefixed_ratios(s)));
    const Solution fs = solve_reference(build_full_size(s));
    ASSERT_EQ(pf.status, SolveStatus::kOptimal);
    ASSERT_EQ(fs.status, SolveStatus::kOptimal);
    EXPECT_GE(pf.objective, fs.objective - 1e-6 * fs.objective);
  }
}

TEST(Prefixed, NeedsReference) {
  Scenario s = site_toy();
  s.fidelity.prefixed.reset();
  try {
    derive_prefixed_ratios(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kUnderdeterminedReference);
  }
}

TEST(MultiFidelity, EmptyPlanIsFullSize) {
  const Scenario s = site_toy();
  const CompiledScenario cs = compile_scenario(s);
  PackingPlan empty;
  empty.commodity_count = static_cast<int>(cs.space.size());
  empty.arc_count = static_cast<int>(cs.graph.arcs().size());
  EXPECT_TRUE(models_identical(build_multifidelity(s, empty), build_full_size(s)));
}

TEST(MultiFidelity, LowerBoundsFullSize) {
  for (bool tank : {false, true}) {
    const Scenario s = site_toy(tank);
    const MilpModel full = build_full_size(s);
    const PackResult packed = pack_model(full, s);
    EXPECT_LT(packed.model.cols(), full.cols());
    const Solution mf = solve_reference(packed.model);
    const Solution fs = solve_reference(full);
    ASSERT_EQ(mf.status, SolveStatus::kOptimal);
    EXPECT_LE(mf.objective, fs.objective + 1e-6 * fs.objective);
    EXPECT_TRUE(models_identical(build_multifidelity(s, packed.plan), packed.model));
  }
}

TEST(Compile, SupplyDemandTable) {
  const CompiledScenario cs = compile_scenario(rocket_toy(7.0));
  EXPECT_EQ(cs.d.at({0, 0, 0}), 7.0);
  EXPECT_EQ(cs.d.at({1, 1, 0}), -7.0);
}

}  // namespace
}  // namespace spacelog
