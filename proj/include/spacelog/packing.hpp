#pragma once
// Commodity packing: per-arc candidate search and the model transformations
// F1 -> F2 (constraint aggregation) -> F3 (variable packing).

#include <optional>
#include <string>
#include <vector>

#include "spacelog/commodity.hpp"
#include "spacelog/formulation.hpp"
#include "spacelog/model.hpp"

namespace spacelog {

/// Disjoint index sets covering 0..n-1, each sorted, groups ordered by
/// their smallest member.
using Partition = std::vector<std::vector<int>>;

bool is_partition(const Partition& p, int n);
/// Every set of `fine` lies inside some set of `coarse`.
bool refines(const Partition& fine, const Partition& coarse);

/// rel_tol 0 means exact equality.
Partition partition_by_cost(const Eigen::VectorXd& cost, double rel_tol = 0.0);
/// l, l' together iff F[l,u] == F[l',u] for every u outside {l, l'}; groups
/// are grown first-fit so every pair inside a group satisfies the predicate.
Partition partition_by_transformation(const Matrix& f, double rel_tol = 0.0);
/// Columns of H equal.
Partition partition_by_concurrency(const Matrix& h, double rel_tol = 0.0);
/// All nonempty intersections, ordered by smallest member.
Partition intersect_partitions(const std::vector<Partition>& parts);

/// Drops singletons, orders by descending size (ties: smallest member first),
/// keeps the first n. Throws Error(kNTooLarge) when n exceeds |zeta|.
Partition select_packables(const Partition& zeta, std::optional<int> n);

struct AggregationMatrix {
  Matrix g;  // K x R, 0/1
  int n = 0;  // packages
  int l = 0;  // packed commodities
  int k = 0;  // N + R - L
  int r = 0;
};

/// Package rows first, then unit rows for unpacked indices in ascending order.
AggregationMatrix build_aggregation_matrix(const Partition& selected, int r);

/// Exactly one nonzero per column, at least one per row, entries 0/1.
bool satisfies_aggregation_conditions(const Matrix& g);

struct ArcPacking {
  int arc = -1;
  int from = 0, to = 0, depart = 0, arrive = 0;  // endpoints in the time-expanded graph
  std::vector<int> commodities;  // arc-local list (global indices)
  Partition sigma0, sigma1, sigma2, sigma3;  // positions into `commodities`
  Partition zeta;
  Partition selected;
  AggregationMatrix g;
};

struct PackingPlan {
  int commodity_count = 0;
  int arc_count = 0;
  std::vector<ArcPacking> arcs;            // arcs with at least one package
  std::vector<int> arcs_without_packables;
  /// Candidate sets removed because the aggregated model broke Conditions 3-4.
  std::vector<std::pair<int, std::vector<int>>> rejected;

  bool empty() const { return arcs.empty(); }
};

struct PackingOptions {
  std::optional<int> n;
  bool include_idle_holdovers = false;
  bool all_categories = false;
  double rel_tol = 0.0;
};

PackingOptions packing_options(const Scenario& s);

/// Steps 1-6 for every eligible arc of a compiled scenario.
PackingPlan plan_packing(const CompiledScenario& cs, const PackingOptions& options);

/// Constraint aggregation with an explicit K x m matrix. Rows combined must
/// share one sense. Throws Error(kInvalidAggregationMatrix).
MilpModel aggregate_constraints(const MilpModel& model, const Eigen::SparseMatrix<double>& g);
/// Same transformation described by disjoint row groups (others untouched).
MilpModel aggregate_rows(const MilpModel& model, const std::vector<std::vector<int>>& groups);

struct ConditionWitness {
  std::string kind;  // "cost", "column", "integer", "missing"
  int column_a = -1;
  int column_b = -1;
  int row = -1;
  double value_a = 0.0;
  double value_b = 0.0;
};

struct ConditionCheck {
  bool ok = true;
  std::optional<ConditionWitness> witness;
};

/// Conditions 3-4 on explicit columns of a model.
ConditionCheck check_column_set(const MilpModel& model, const std::vector<int>& columns,
                                double rel_tol = 0.0);
/// Same, addressing columns by (arc, commodity) metadata.
ConditionCheck check_packing_conditions(const MilpModel& model, int arc,
                                        const std::vector<int>& commodities, double rel_tol = 0.0);

/// Merges each column group into one column carrying the shared
/// coefficients; bounds add. Throws Error(kConditionsViolated).
MilpModel pack_variables(const MilpModel& model, const std::vector<std::vector<int>>& groups,
                         double rel_tol = 0.0);

struct PackResult {
  PackingPlan plan;
  MilpModel model;
};

/// Aggregates and packs per the plan; sets failing Conditions 3-4 after
/// aggregation are dropped (recorded in plan.rejected) and the pass repeats.
PackResult apply_packing_plan(const MilpModel& full, PackingPlan plan, double rel_tol = 0.0);

/// plan_packing + apply_packing_plan on the full-size model of `s`.
PackResult pack_model(const MilpModel& full, const Scenario& s);

std::string packing_plan_json(const PackingPlan& plan, const CommoditySpace& space,
                              const TimeExpandedGraph& graph);

}  // namespace spacelog
