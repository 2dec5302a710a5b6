#pragma once
// Three-fidelity comparison, its report formats and per-solution flow ledgers.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "spacelog/formulation.hpp"
#include "spacelog/model.hpp"
#include "spacelog/solver.hpp"

namespace spacelog {

enum class Fidelity { kPrefixed, kFullSize, kMultiFidelity };

const char* fidelity_name(Fidelity f);  // prefixed, full_size, multi_fidelity
/// Accepts the canonical names and the CLI short forms (full, multi).
Fidelity fidelity_from_name(const std::string& s);

/// The model of one fidelity for a scenario. Multi-fidelity also returns its plan.
MilpModel build_fidelity(const Scenario& s, Fidelity f, PackingPlan* plan_out = nullptr);

struct FidelityResult {
  Fidelity fidelity = Fidelity::kFullSize;
  bool built = false;
  std::string error;  // build failure message
  std::string status;  // solve status name, empty when not built
  std::optional<double> objective;
  std::optional<double> bound;
  std::optional<double> cost_error_pct;       // (J - J_fs) / J_fs * 100
  std::optional<double> time_reduction_pct;   // (t - t_fs) / t_fs * 100
  ModelStats stats;
  double build_seconds = 0.0;
  double solve_seconds = 0.0;
  long nodes = 0;

  bool operator==(const FidelityResult&) const = default;
};

struct PackingSummary {
  int arcs_considered = 0;
  int arcs_packed = 0;
  int columns_removed = 0;
  int rows_removed = 0;
  int rejected_sets = 0;

  bool operator==(const PackingSummary&) const = default;
};

struct ComparisonReport {
  std::string scenario;
  std::string solver;
  std::vector<FidelityResult> results;  // prefixed, full_size, multi_fidelity
  PackingSummary packing;
  std::string ordering;  // PASS, FAIL or UNCHECKED
  std::vector<std::string> notes;

  const FidelityResult& result(Fidelity f) const;
  bool operator==(const ComparisonReport&) const = default;
};

/// Checks J_mf <= J_fs <= J_pf over the pairs where both ends are optimal,
/// with relative slack `rel_tol`. Sets `ordering` and appends notes.
void check_ordering(ComparisonReport& report, double rel_tol = 1e-6);
/// Fills the cost-error and time-reduction columns from the raw values.
void fill_relative_columns(ComparisonReport& report);

struct FlowEntry {
  int arc = -1;
  std::string kind;  // transport or holdover
  std::string vehicle;
  std::string from, to;
  double depart_day = 0.0, arrive_day = 0.0;
  std::vector<std::string> commodities;
  std::string content;  // commodity, package (total only) or bundle
  double amount = 0.0;

  bool operator==(const FlowEntry&) const = default;
};

struct InventoryEntry {
  std::string node;
  double day = 0.0;
  std::string commodity;
  double amount = 0.0;

  bool operator==(const InventoryEntry&) const = default;
};

struct SizingEntry {
  std::string node;
  std::string commodity;
  double peak_kg = 0.0;

  bool operator==(const SizingEntry&) const = default;
};

struct FlowLedger {
  std::string fidelity;
  std::vector<FlowEntry> flows;
  std::vector<InventoryEntry> inventory;  // holdover content leaving (node, day)
  std::vector<SizingEntry> sizing;        // peak infrastructure kg per site

  bool operator==(const FlowLedger&) const = default;
};

/// Reconstructs flows from column metadata; values below `eps` are skipped.
FlowLedger build_flow_ledger(const CompiledScenario& cs, const MilpModel& model,
                             const std::vector<double>& values, const std::string& fidelity,
                             double eps = 1e-7);

struct ComparisonOutput {
  ComparisonReport report;
  std::vector<FlowLedger> ledgers;  // one per fidelity that produced values
};

/// Builds and solves the three fidelities. Build failures are recorded, not thrown.
ComparisonOutput compare_fidelities(const Scenario& s, SolverAdapter& adapter, const SolveLimits& limits);

std::string report_to_json(const ComparisonReport& r);
ComparisonReport report_from_json(const std::string& text);  // throws Error(kParseError)
/// Fixed-width table: formulation, mission cost, cost error %, time, time reduction %.
std::string render_table(const ComparisonReport& r);

enum class ReportFormat { kJson, kTable };
void write_report(const ComparisonReport& r, ReportFormat format, const std::filesystem::path& path);

std::string ledger_to_json(const FlowLedger& l);
FlowLedger ledger_from_json(const std::string& text);

}  // namespace spacelog
