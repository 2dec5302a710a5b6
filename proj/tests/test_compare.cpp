#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "spacelog/compare.hpp"
#include "spacelog/error.hpp"
#include "spacelog/io.hpp"
#include "spacelog/packing.hpp"
#include "support/toy.hpp"

namespace spacelog {
namespace {

ComparisonOutput run(const Scenario& s) {
  ReferenceSolver ref;
  return compare_fidelities(s, ref, {});
}

TEST(Compare, TinyScenario) {
  const ComparisonOutput out = run(testing::site_toy());
  const ComparisonReport& r = out.report;
  ASSERT_EQ(r.results.size(), 3u);
  for (const auto& f : r.results) {
    EXPECT_TRUE(f.built);
    EXPECT_EQ(f.status, "optimal");
    ASSERT_TRUE(f.objective.has_value());
  }
  EXPECT_EQ(r.ordering, "PASS");
  EXPECT_EQ(out.ledgers.size(), 3u);
  // Gap arithmetic, recomputed from the raw objectives.
  const double fs = *r.result(Fidelity::kFullSize).objective;
  for (const auto& f : r.results) {
    EXPECT_NEAR(*f.cost_error_pct, (*f.objective - fs) / fs * 100.0, 1e-9);
  }
  EXPECT_GT(*r.result(Fidelity::kPrefixed).cost_error_pct, 0.0);
  EXPECT_LE(*r.result(Fidelity::kMultiFidelity).cost_error_pct, 1e-9);
  EXPECT_GT(r.packing.arcs_packed, 0);
}

TEST(Compare, EmptyPlanMatchesFullSize) {
  const ComparisonReport r = run(testing::rocket_toy()).report;
  EXPECT_EQ(r.packing.arcs_packed, 0);
  EXPECT_EQ(*r.result(Fidelity::kMultiFidelity).objective, *r.result(Fidelity::kFullSize).objective);
}

TEST(Compare, PrefixedBuildFailureIsRecorded) {
  Scenario s = testing::rocket_toy();
  s.fidelity.prefixed.reset();
  const ComparisonReport r = run(s).report;
  EXPECT_FALSE(r.result(Fidelity::kPrefixed).built);
  EXPECT_FALSE(r.result(Fidelity::kPrefixed).error.empty());
  EXPECT_TRUE(r.result(Fidelity::kFullSize).built);
}

TEST(Compare, OrderingRestrictedWhenPrefixedInfeasible) {
  ComparisonReport r;
  r.results = {{Fidelity::kPrefixed, true, "", "infeasible"},
               {Fidelity::kFullSize, true, "", "optimal", 10.0},
               {Fidelity::kMultiFidelity, true, "", "optimal", 9.0}};
  check_ordering(r);
  EXPECT_EQ(r.ordering, "PASS");
  EXPECT_FALSE(r.notes.empty());
  r.results[2].objective = 11.0;
  r.notes.clear();
  check_ordering(r);
  EXPECT_EQ(r.ordering, "FAIL");
}

TEST(Compare, Deterministic) {
  const ComparisonOutput a = run(testing::site_toy());
  const ComparisonOutput b = run(testing::site_toy());
  for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(a.report.results[k].objective, b.report.results[k].objective);
  EXPECT_EQ(a.ledgers, b.ledgers);
}

TEST(Report, JsonRoundTrip) {
  ComparisonReport r = run(testing::site_toy()).report;
  const ComparisonReport back = report_from_json(report_to_json(r));
  EXPECT_EQ(back, r);
  r.results[0].objective.reset();
  r.results[0].cost_error_pct.reset();
  EXPECT_EQ(report_from_json(report_to_json(r)), r);
  EXPECT_THROW(report_from_json("[1,2"), Error);
}

TEST(Report, TableColumns) {
  const std::string t = render_table(run(testing::site_toy()).report);
  for (const char* h : {"Formulation", "Mission cost (IMLEO), kg", "Cost error, %", "Time, s", "Time reduction, %"}) {
    EXPECT_NE(t.find(h), std::string::npos) << h;
  }
  for (const char* f : {"prefixed", "full_size", "multi_fidelity"}) EXPECT_NE(t.find(f), std::string::npos);
}

TEST(Report, WriteFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "spacelog_report_test";
  std::filesystem::create_directories(dir);
  const ComparisonReport r = run(testing::rocket_toy()).report;
  write_report(r, ReportFormat::kJson, dir / "r.json");
  write_report(r, ReportFormat::kTable, dir / "r.txt");
  EXPECT_EQ(report_from_json(read_file(dir / "r.json")), r);
  EXPECT_EQ(read_file(dir / "r.txt"), render_table(r));
  std::filesystem::remove_all(dir);
}

TEST(Ledger, EmptyFlow) {
  const CompiledScenario cs = compile_scenario(testing::rocket_toy());
  const MilpModel m = assemble_model(cs);
  const FlowLedger l = build_flow_ledger(cs, m, std::vector<double>(static_cast<std::size_t>(m.cols()), 0.0), "full_size");
  EXPECT_TRUE(l.flows.empty());
  EXPECT_TRUE(l.inventory.empty());
  EXPECT_EQ(ledger_from_json(ledger_to_json(l)), l);
}

TEST(Ledger, RocketFlows) {
  const ComparisonOutput out = run(testing::rocket_toy());
  const auto it = std::find_if(out.ledgers.begin(), out.ledgers.end(),
                               [](const FlowLedger& x) { return x.fidelity == "full_size"; });
  ASSERT_NE(it, out.ledgers.end());
  const FlowLedger& l = *it;
  bool prop = false;
  for (const auto& f : l.flows) {
    if (f.kind == "transport" && f.commodities == std::vector<std::string>{"prop"}) {
      EXPECT_NEAR(f.amount, 1001.0, 1e-6);
      prop = true;
    }
  }
  EXPECT_TRUE(prop);
  EXPECT_EQ(ledger_from_json(ledger_to_json(l)), l);
}

TEST(Ledger, PackagesReportTotals) {
  const Scenario s = testing::site_toy();
  const ComparisonOutput out = run(s);
  const FlowLedger& mf = out.ledgers.at(2);
  ASSERT_EQ(mf.fidelity, "multi_fidelity");
  for (const auto& f : mf.flows) {
    if (f.commodities.size() > 1) EXPECT_NE(f.content.find("package"), std::string::npos);
  }
  EXPECT_FALSE(mf.sizing.empty());
}

TEST(Names, Fidelities) {
  EXPECT_EQ(fidelity_from_name("full"), Fidelity::kFullSize);
  EXPECT_EQ(fidelity_from_name("multi"), Fidelity::kMultiFidelity);
  EXPECT_EQ(fidelity_from_name(fidelity_name(Fidelity::kPrefixed)), Fidelity::kPrefixed);
  EXPECT_THROW(fidelity_from_name("medium"), Error);
}

}  // namespace
}  // namespace spacelog
