// spacelog: scenario validation, model building, packing, solving and
// three-fidelity comparison from the command line.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "spacelog/compare.hpp"
#include "spacelog/error.hpp"
#include "spacelog/io.hpp"
#include "spacelog/mps.hpp"
#include "spacelog/packing.hpp"
#include "spacelog/random_scenario.hpp"
#include "spacelog/scenario.hpp"
#include "spacelog/solver.hpp"

namespace fs = std::filesystem;
using namespace spacelog;

namespace {

struct Globals {
  double limits_seconds = 600.0;
  long max_nodes = 1'000'000;
  std::uint64_t seed = 1;
  std::string ext_solver;
  bool reference = false;
};

SolveLimits limits(const Globals& g) {
  SolveLimits l;
  l.max_seconds = g.limits_seconds;
  l.max_nodes = g.max_nodes;
  return l;
}

std::unique_ptr<SolverAdapter> make_adapter(const Globals& g) {
  if (!g.reference) {
    std::string exe = g.ext_solver.empty() ? external_solver_from_env() : g.ext_solver;
    if (!exe.empty()) return std::make_unique<ExternalSolver>(exe);
  }
  return std::make_unique<ReferenceSolver>();
}

Scenario load(const std::string& path) {
  Scenario s = load_scenario(path);
  for (const auto& w : validate_scenario(s).warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  return s;
}

void print_stats(const char* label, const ModelStats& st) {
  std::printf("%s: %d rows, %d columns (%d integer), %lld nonzeros\n", label, st.rows, st.columns,
              st.integer_columns, st.nonzeros);
}

int cmd_validate(const std::string& path) {
  Scenario s;
  try {
    s = scenario_from_json(read_file(path));
  } catch (const Error& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  }
  const ValidationResult r = validate_scenario(s);
  for (const auto& e : r.errors) std::printf("error: %s\n", e.c_str());
  for (const auto& w : r.warnings) std::printf("warning: %s\n", w.c_str());
  const TimeGrid grid = r.ok() ? s.grid() : TimeGrid{};
  if (r.ok()) {
    std::printf("%s: valid (%zu nodes, %zu vehicles, %zu commodities, %zu time points)\n", s.name.c_str(),
                s.nodes.size(), s.vehicles.size(), s.commodities.size(), grid.size());
  }
  return r.ok() ? 0 : 1;
}

int cmd_build(const std::string& path, const std::string& fidelity, const std::string& mps_out) {
  const Scenario s = load(path);
  const Fidelity f = fidelity_from_name(fidelity);
  const MilpModel m = build_fidelity(s, f);
  print_stats(fidelity_name(f), model_stats(m));
  if (!mps_out.empty()) {
    export_mps(m, mps_out);
    std::printf("wrote %s\n", mps_out.c_str());
  }
  return 0;
}

int cmd_pack(const std::string& path, const std::string& plan_out) {
  const Scenario s = load(path);
  const CompiledScenario cs = compile_scenario(s);
  const MilpModel full = assemble_model(cs);
  const PackResult r = apply_packing_plan(full, plan_packing(cs, packing_options(s)), s.fidelity.coefficient_rel_tol);
  print_stats("full_size", model_stats(full));
  print_stats("multi_fidelity", model_stats(r.model));
  std::printf("packed arcs: %zu, rejected candidate sets: %zu\n", r.plan.arcs.size(), r.plan.rejected.size());
  const std::string json = packing_plan_json(r.plan, cs.space, cs.graph);
  if (plan_out.empty()) {
    std::printf("%s\n", json.c_str());
  } else {
    write_file_atomic(plan_out, json + "\n");
    std::printf("wrote %s\n", plan_out.c_str());
  }
  return 0;
}

int cmd_solve(const Globals& g, const std::string& path, const std::string& fidelity,
              const std::string& ledger_out) {
  const Scenario s = load(path);
  const Fidelity f = fidelity_from_name(fidelity);
  const MilpModel m = build_fidelity(s, f);
  print_stats(fidelity_name(f), model_stats(m));
  auto adapter = make_adapter(g);
  const Solution sol = adapter->solve(m, limits(g));
  std::printf("solver: %s\nstatus: %s\n", adapter->name().c_str(), status_name(sol.status));
  if (sol.has_values) {
    std::printf("objective: %.6f\n", sol.objective);
    const FeasibilityReport chk = check_solution(m, sol.values);
    std::printf("check: %s (row %.2e, bound %.2e, integrality %.2e)\n", chk.pass ? "pass" : "FAIL",
                chk.max_row_violation, chk.max_bound_violation, chk.max_integrality_violation);
    if (!ledger_out.empty()) {
      const CompiledScenario cs = compile_scenario(s);
      write_file_atomic(ledger_out, ledger_to_json(build_flow_ledger(cs, m, sol.values, fidelity_name(f))) + "\n");
      std::printf("wrote %s\n", ledger_out.c_str());
    }
  }
  return sol.status == SolveStatus::kOptimal ? 0 : 1;
}

int cmd_compare(const Globals& g, const std::string& path, const std::string& out_dir) {
  const Scenario s = load(path);
  auto adapter = make_adapter(g);
  const ComparisonOutput out = compare_fidelities(s, *adapter, limits(g));
  std::printf("%s", render_table(out.report).c_str());
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_report(out.report, ReportFormat::kJson, fs::path(out_dir) / "report.json");
    write_report(out.report, ReportFormat::kTable, fs::path(out_dir) / "report.txt");
    for (const FlowLedger& l : out.ledgers) {
      write_file_atomic(fs::path(out_dir) / ("ledger_" + l.fidelity + ".json"), ledger_to_json(l) + "\n");
    }
    std::printf("wrote %s\n", out_dir.c_str());
  }
  bool built = true;
  for (const auto& r : out.report.results) built = built && r.built;
  return (out.report.ordering == "FAIL" || !built) ? 1 : 0;
}

int cmd_report(const std::string& raw, const std::string& format, const std::string& out) {
  const ComparisonReport r = report_from_json(read_file(raw));
  const ReportFormat f = format == "table" ? ReportFormat::kTable : ReportFormat::kJson;
  if (out.empty()) {
    std::printf("%s", f == ReportFormat::kTable ? render_table(r).c_str() : (report_to_json(r) + "\n").c_str());
  } else {
    write_report(r, f, out);
  }
  return 0;
}

int cmd_lunar(const LunarVariant& v, const std::string& out) {
  const Scenario s = bundled_lunar_scenario(v);
  if (out.empty()) {
    std::printf("%s\n", scenario_to_json(s).c_str());
  } else {
    save_scenario(s, out);
    std::printf("wrote %s\n", out.c_str());
  }
  return 0;
}

int cmd_fuzz(const Globals& g, int count) {
  ReferenceSolver ref;
  int checked = 0, failed = 0;
  for (int k = 0; k < count; ++k) {
    const std::uint64_t seed = g.seed + static_cast<std::uint64_t>(k);
    const ComparisonReport r = compare_fidelities(random_scenario(seed), ref, limits(g)).report;
    auto obj = [&](Fidelity f) {
      const auto& x = r.result(f);
      return x.objective ? std::to_string(*x.objective) : x.status;
    };
    std::printf("seed %llu: pf %s fs %s mf %s ordering %s\n", static_cast<unsigned long long>(seed),
                obj(Fidelity::kPrefixed).c_str(), obj(Fidelity::kFullSize).c_str(),
                obj(Fidelity::kMultiFidelity).c_str(), r.ordering.c_str());
    checked += r.ordering == "PASS";
    failed += r.ordering == "FAIL";
  }
  std::printf("%d scenarios, %d ordering checks passed, %d failed\n", count, checked, failed);
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Space logistics campaign planning at three model fidelities"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--limits-seconds", g.limits_seconds, "Time limit per solve")->check(CLI::PositiveNumber);
  app.add_option("--max-nodes", g.max_nodes, "Branch-and-bound node limit")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "First seed for fuzz runs");
  app.add_option("--ext-solver", g.ext_solver, "External solver executable (default: $SPACELOG_EXT_SOLVER)");
  app.add_flag("--reference", g.reference, "Use the bundled solver even if an external one is configured");

  std::string scenario, fidelity = "full", mps_out, plan_out, ledger_out, out_dir, raw, format = "table", out;
  int count = 100;
  LunarVariant variant;

  auto* validate = app.add_subcommand("validate", "Check a scenario file");
  validate->add_option("scenario", scenario)->required();

  auto* build = app.add_subcommand("build", "Build one fidelity and optionally export MPS");
  build->add_option("scenario", scenario)->required();
  build->add_option("--fidelity", fidelity)->check(CLI::IsMember({"prefixed", "full", "multi"}));
  build->add_option("--mps", mps_out, "MPS output path");

  auto* pack = app.add_subcommand("pack", "Run commodity packing and write the plan");
  pack->add_option("scenario", scenario)->required();
  pack->add_option("--plan-out", plan_out, "Plan JSON output path");

  auto* solve = app.add_subcommand("solve", "Build and solve one fidelity");
  solve->add_option("scenario", scenario)->required();
  solve->add_option("--fidelity", fidelity)->check(CLI::IsMember({"prefixed", "full", "multi"}));
  solve->add_option("--ledger-out", ledger_out, "Flow ledger JSON output path");

  auto* compare = app.add_subcommand("compare", "Solve all three fidelities and compare");
  compare->add_option("scenario", scenario)->required();
  compare->add_option("--out-dir", out_dir, "Directory for report and ledgers");

  auto* report = app.add_subcommand("report", "Render a saved comparison report");
  report->add_option("raw", raw)->required();
  report->add_option("--format", format)->check(CLI::IsMember({"json", "table"}));
  report->add_option("--out", out);

  auto* lunar = app.add_subcommand("lunar", "Write the bundled lunar campaign scenario");
  lunar->add_option("--missions", variant.missions);
  lunar->add_option("--interval", variant.launch_interval_days);
  lunar->add_option("--productivity", variant.isru_productivity);
  lunar->add_option("--storage-scale", variant.storage_scale);
  lunar->add_option("--out", out);

  auto* fuzz = app.add_subcommand("fuzz", "Bound-chain check over random scenarios");
  fuzz->add_option("--count", count)->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) return cmd_validate(scenario);
    if (*build) return cmd_build(scenario, fidelity, mps_out);
    if (*pack) return cmd_pack(scenario, plan_out);
    if (*solve) return cmd_solve(g, scenario, fidelity, ledger_out);
    if (*compare) return cmd_compare(g, scenario, out_dir);
    if (*report) return cmd_report(raw, format, out);
    if (*lunar) return cmd_lunar(variant, out);
    if (*fuzz) return cmd_fuzz(g, count);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    for (const auto& d : e.diagnostics()) std::fprintf(stderr, "  %s\n", d.c_str());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
