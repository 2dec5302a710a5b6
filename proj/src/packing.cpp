#include "spacelog/packing.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <map>
#include <numeric>
#include <set>

#include "spacelog/error.hpp"

namespace spacelog {

namespace {

bool coeff_equal(double a, double b, double rel_tol) {
  if (a == b) return true;
  if (rel_tol <= 0.0) return false;
  return std::fabs(a - b) <= rel_tol * std::max(std::fabs(a), std::fabs(b));
}

void canonicalize(Partition& p) {
  for (auto& g : p) std::sort(g.begin(), g.end());
  std::sort(p.begin(), p.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
}

// First-fit grouping where a new member must agree with every current member.
template <typename Pred>
Partition first_fit(int n, Pred same) {
  Partition p;
  for (int i = 0; i < n; ++i) {
    bool placed = false;
    for (auto& g : p) {
      if (std::all_of(g.begin(), g.end(), [&](int m) { return same(m, i); })) {
        g.push_back(i);
        placed = true;
        break;
      }
    }
    if (!placed) p.push_back({i});
  }
  canonicalize(p);
  return p;
}

}  // namespace

bool is_partition(const Partition& p, int n) {
  std::vector<int> seen(static_cast<std::size_t>(n), 0);
  for (const auto& g : p) {
    if (g.empty()) return false;
    for (int i : g) {
      if (i < 0 || i >= n || seen[static_cast<std::size_t>(i)]++) return false;
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; });
}

bool refines(const Partition& fine, const Partition& coarse) {
  std::map<int, int> owner;
  for (std::size_t g = 0; g < coarse.size(); ++g) {
    for (int i : coarse[g]) owner[i] = static_cast<int>(g);
  }
  for (const auto& g : fine) {
    std::set<int> owners;
    for (int i : g) {
      auto it = owner.find(i);
      if (it == owner.end()) return false;
      owners.insert(it->second);
    }
    if (owners.size() > 1) return false;
  }
  return true;
}

Partition partition_by_cost(const Eigen::VectorXd& cost, double rel_tol) {
  return first_fit(static_cast<int>(cost.size()),
                   [&](int a, int b) { return coeff_equal(cost(a), cost(b), rel_tol); });
}

Partition partition_by_transformation(const Matrix& f, double rel_tol) {
  const auto n = f.rows();
  return first_fit(static_cast<int>(n), [&](int l, int lp) {
    for (Eigen::Index u = 0; u < n; ++u) {
      if (u == l || u == lp) continue;
      if (!coeff_equal(f(l, u), f(lp, u), rel_tol)) return false;
    }
    return true;
  });
}

Partition partition_by_concurrency(const Matrix& h, double rel_tol) {
  return first_fit(static_cast<int>(h.cols()), [&](int a, int b) {
    for (Eigen::Index r = 0; r < h.rows(); ++r) {
      if (!coeff_equal(h(r, a), h(r, b), rel_tol)) return false;
    }
    return true;
  });
}

Partition intersect_partitions(const std::vector<Partition>& parts) {
  std::map<int, std::vector<int>> label;
  for (const Partition& p : parts) {
    for (std::size_t g = 0; g < p.size(); ++g) {
      for (int i : p[g]) label[i].push_back(static_cast<int>(g));
    }
  }
  std::map<std::vector<int>, std::vector<int>> cells;
  for (const auto& [i, key] : label) cells[key].push_back(i);
  Partition out;
  for (auto& [key, members] : cells) out.push_back(std::move(members));
  canonicalize(out);
  return out;
}

Partition select_packables(const Partition& zeta, std::optional<int> n) {
  if (n && *n > static_cast<int>(zeta.size())) {
    throw Error(Errc::kNTooLarge, "N = " + std::to_string(*n) + " exceeds " +
                                      std::to_string(zeta.size()) + " intersection sets");
  }
  Partition sorted;
  for (const auto& g : zeta) {
    if (g.size() > 1) sorted.push_back(g);
  }
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a.front() < b.front();
  });
  if (n && static_cast<std::size_t>(*n) < sorted.size()) sorted.resize(static_cast<std::size_t>(*n));
  return sorted;
}

AggregationMatrix build_aggregation_matrix(const Partition& selected, int r) {
  AggregationMatrix out;
  out.r = r;
  out.n = static_cast<int>(selected.size());
  std::vector<char> packed(static_cast<std::size_t>(r), 0);
  for (const auto& g : selected) {
    for (int i : g) {
      packed[static_cast<std::size_t>(i)] = 1;
      ++out.l;
    }
  }
  out.k = out.n + r - out.l;
  out.g = Matrix::Zero(out.k, r);
  for (int u = 0; u < out.n; ++u) {
    for (int i : selected[static_cast<std::size_t>(u)]) out.g(u, i) = 1.0;
  }
  int row = out.n;
  for (int j = 0; j < r; ++j) {
    if (!packed[static_cast<std::size_t>(j)]) out.g(row++, j) = 1.0;
  }
  return out;
}

bool satisfies_aggregation_conditions(const Matrix& g) {
  for (Eigen::Index j = 0; j < g.cols(); ++j) {
    int nz = 0;
    for (Eigen::Index k = 0; k < g.rows(); ++k) {
      const double v = g(k, j);
      if (v != 0.0 && v != 1.0) return false;
      nz += v != 0.0;
    }
    if (nz != 1) return false;
  }
  for (Eigen::Index k = 0; k < g.rows(); ++k) {
    if ((g.row(k).array() != 0.0).count() == 0) return false;
  }
  return true;
}

PackingOptions packing_options(const Scenario& s) {
  PackingOptions o;
  o.n = s.fidelity.packing_n;
  o.include_idle_holdovers = s.fidelity.include_idle_holdovers;
  o.all_categories = s.fidelity.packable_categories == "all";
  o.rel_tol = s.fidelity.coefficient_rel_tol;
  return o;
}

PackingPlan plan_packing(const CompiledScenario& cs, const PackingOptions& options) {
  PackingPlan plan;
  plan.commodity_count = static_cast<int>(cs.space.size());
  plan.arc_count = static_cast<int>(cs.arcs.size());
  const auto& arcs = cs.graph.arcs();
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    const Arc& arc = arcs[a];
    const ArcPhysics& p = cs.arcs[a];
    if (arc.is_holdover() && (!options.include_idle_holdovers || p.at_site)) continue;

    ArcPacking ap;
    ap.arc = static_cast<int>(a);
    ap.from = arc.from;
    ap.to = arc.to;
    ap.depart = arc.depart;
    ap.arrive = arc.arrive;
    ap.commodities = p.commodities;
    const int r = static_cast<int>(p.commodities.size());

    // Eligibility: discrete commodities never share a package. By default
    // only site hardware (subsystems, power, storage, their spares) may.
    std::vector<int> eligible;
    for (int q = 0; q < r; ++q) {
      const Commodity& c = cs.space[static_cast<std::size_t>(p.commodities[static_cast<std::size_t>(q)])];
      const bool ok = c.kind == CommodityKind::kContinuous && (options.all_categories || c.is_infrastructure() || c.category == CommodityCategory::kSpare);
      if (ok) {
        eligible.push_back(q);
      } else {
        ap.sigma0.push_back({q});
      }
    }
    if (!eligible.empty()) ap.sigma0.push_back(eligible);
    canonicalize(ap.sigma0);

    ap.sigma1 = partition_by_cost(p.cost, options.rel_tol);
    ap.sigma2 = partition_by_transformation(p.f, options.rel_tol);
    ap.sigma3 = partition_by_concurrency(p.h, options.rel_tol);
    ap.zeta = intersect_partitions({ap.sigma0, ap.sigma1, ap.sigma2, ap.sigma3});
    ap.selected = select_packables(ap.zeta, options.n);
    if (ap.selected.empty()) {
      plan.arcs_without_packables.push_back(ap.arc);
      continue;
    }
    ap.g = build_aggregation_matrix(ap.selected, r);
    plan.arcs.push_back(std::move(ap));
  }
  return plan;
}

// ---- F1 -> F2 ---------------------------------------------------------------

namespace {

// Rebuild with new rows given as (member rows) lists, in output order.
MilpModel combine_rows(const MilpModel& model, const std::vector<std::vector<int>>& new_rows) {
  const SparseMatrix at = model.a.transpose();  // column j of at = row j of a
  ModelBuilder b;
  for (int j = 0; j < model.cols(); ++j) {
    const auto uj = static_cast<std::size_t>(j);
    b.add_column(model.objective[uj], model.lower[uj], model.upper[uj], model.is_integer[uj] != 0,
                 model.col_meta[uj]);
  }
  for (const auto& members : new_rows) {
    std::map<int, double> acc;
    double rhs = 0.0;
    const RowSense sense = model.sense[static_cast<std::size_t>(members.front())];
    RowMeta meta = model.row_meta[static_cast<std::size_t>(members.front())];
    for (int i : members) {
      const auto ui = static_cast<std::size_t>(i);
      if (model.sense[ui] != sense) {
        throw Error(Errc::kInvalidAggregationMatrix, "aggregated rows mix constraint senses");
      }
      rhs += model.rhs[ui];
      for (SparseMatrix::InnerIterator it(at, i); it; ++it) acc[static_cast<int>(it.row())] += it.value();
      if (i != members.front()) {
        const RowMeta& other = model.row_meta[ui];
        meta.commodities.insert(meta.commodities.end(), other.commodities.begin(), other.commodities.end());
        if (other.family != meta.family) meta.family = RowFamily::kGeneric;
      }
    }
    std::sort(meta.commodities.begin(), meta.commodities.end());
    meta.commodities.erase(std::unique(meta.commodities.begin(), meta.commodities.end()),
                           meta.commodities.end());
    std::vector<std::pair<int, double>> entries(acc.begin(), acc.end());
    b.add_row(sense, rhs, entries, std::move(meta));
  }
  MilpModel out = std::move(b).finish(model.name);
  out.objective_offset = model.objective_offset;
  if (!model.col_names.empty()) out.col_names = model.col_names;
  return out;
}

}  // namespace

MilpModel aggregate_constraints(const MilpModel& model, const Eigen::SparseMatrix<double>& g) {
  if (g.cols() != model.rows()) {
    throw Error(Errc::kInvalidAggregationMatrix, "G has " + std::to_string(g.cols()) +
                                                     " columns for " + std::to_string(model.rows()) + " rows");
  }
  std::vector<std::vector<int>> groups(static_cast<std::size_t>(g.rows()));
  std::vector<int> hits(static_cast<std::size_t>(g.cols()), 0);
  for (int j = 0; j < g.outerSize(); ++j) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(g, j); it; ++it) {
      if (it.value() == 0.0) continue;
      if (it.value() != 1.0) throw Error(Errc::kInvalidAggregationMatrix, "G entries must be 0 or 1");
      groups[static_cast<std::size_t>(it.row())].push_back(static_cast<int>(it.col()));
      ++hits[static_cast<std::size_t>(it.col())];
    }
  }
  for (int j = 0; j < static_cast<int>(hits.size()); ++j) {
    if (hits[static_cast<std::size_t>(j)] != 1) {
      throw Error(Errc::kInvalidAggregationMatrix,
                  "column " + std::to_string(j) + " of G has " + std::to_string(hits[static_cast<std::size_t>(j)]) +
                      " nonzeros");
    }
  }
  for (auto& grp : groups) {
    if (grp.empty()) throw Error(Errc::kInvalidAggregationMatrix, "G has an empty row");
    std::sort(grp.begin(), grp.end());
  }
  return combine_rows(model, groups);
}

MilpModel aggregate_rows(const MilpModel& model, const std::vector<std::vector<int>>& groups) {
  std::vector<int> owner(static_cast<std::size_t>(model.rows()), -1);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (int i : groups[g]) {
      if (i < 0 || i >= model.rows() || owner[static_cast<std::size_t>(i)] != -1) {
        throw Error(Errc::kInvalidAggregationMatrix, "row groups overlap or reference unknown rows");
      }
      owner[static_cast<std::size_t>(i)] = static_cast<int>(g);
    }
  }
  std::vector<std::vector<int>> order;
  std::vector<char> emitted(groups.size(), 0);
  for (int i = 0; i < model.rows(); ++i) {
    const int g = owner[static_cast<std::size_t>(i)];
    if (g < 0) {
      order.push_back({i});
    } else if (!emitted[static_cast<std::size_t>(g)]) {
      emitted[static_cast<std::size_t>(g)] = 1;
      std::vector<int> members = groups[static_cast<std::size_t>(g)];
      std::sort(members.begin(), members.end());
      order.push_back(std::move(members));
    }
  }
  return combine_rows(model, order);
}

// ---- F2 -> F3 ---------------------------------------------------------------

ConditionCheck check_column_set(const MilpModel& model, const std::vector<int>& columns,
                                double rel_tol) {
  ConditionCheck out;
  if (columns.empty()) return out;
  const int first = columns.front();
  const auto uf = static_cast<std::size_t>(first);
  auto fail = [&](ConditionWitness w) {
    out.ok = false;
    out.witness = w;
    return out;
  };
  for (int c : columns) {
    if (model.is_integer[static_cast<std::size_t>(c)]) return fail({"integer", c, -1, -1, 0, 0});
  }
  std::map<int, double> base;
  for (SparseMatrix::InnerIterator it(model.a, first); it; ++it) base[static_cast<int>(it.row())] = it.value();
  for (std::size_t i = 1; i < columns.size(); ++i) {
    const int c = columns[i];
    const double ca = model.objective[uf];
    const double cb = model.objective[static_cast<std::size_t>(c)];
    if (!coeff_equal(ca, cb, rel_tol)) return fail({"cost", first, c, -1, ca, cb});
    std::map<int, double> other;
    for (SparseMatrix::InnerIterator it(model.a, c); it; ++it) other[static_cast<int>(it.row())] = it.value();
    std::set<int> rows;
    for (const auto& [r, v] : base) rows.insert(r);
    for (const auto& [r, v] : other) rows.insert(r);
    for (int r : rows) {
      const double va = base.count(r) ? base[r] : 0.0;
      const double vb = other.count(r) ? other[r] : 0.0;
      if (!coeff_equal(va, vb, rel_tol)) return fail({"column", first, c, r, va, vb});
    }
  }
  return out;
}

ConditionCheck check_packing_conditions(const MilpModel& model, int arc,
                                        const std::vector<int>& commodities, double rel_tol) {
  const auto idx = column_index(model);
  std::vector<int> cols;
  for (int k : commodities) {
    auto it = idx.find({arc, k});
    if (it == idx.end()) {
      ConditionCheck out;
      out.ok = false;
      out.witness = ConditionWitness{"missing", -1, -1, -1, static_cast<double>(arc), static_cast<double>(k)};
      return out;
    }
    cols.push_back(it->second);
  }
  return check_column_set(model, cols, rel_tol);
}

MilpModel pack_variables(const MilpModel& model, const std::vector<std::vector<int>>& groups,
                         double rel_tol) {
  std::vector<int> owner(static_cast<std::size_t>(model.cols()), -1);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].empty()) throw Error(Errc::kConditionsViolated, "empty package");
    for (int c : groups[g]) {
      if (c < 0 || c >= model.cols() || owner[static_cast<std::size_t>(c)] != -1) {
        throw Error(Errc::kConditionsViolated, "packages overlap or reference unknown columns");
      }
      owner[static_cast<std::size_t>(c)] = static_cast<int>(g);
    }
    const ConditionCheck chk = check_column_set(model, groups[g], rel_tol);
    if (!chk.ok) {
      const ConditionWitness& w = *chk.witness;
      throw Error(Errc::kConditionsViolated,
                  w.kind + " mismatch between columns " + std::to_string(w.column_a) + " and " +
                      std::to_string(w.column_b) + (w.row >= 0 ? " at row " + std::to_string(w.row) : ""));
    }
  }
  ModelBuilder b;
  std::vector<int> new_index(static_cast<std::size_t>(model.cols()), -1);
  std::vector<int> sources;
  for (int j = 0; j < model.cols(); ++j) {
    const auto uj = static_cast<std::size_t>(j);
    const int g = owner[uj];
    if (g < 0) {
      new_index[uj] = b.add_column(model.objective[uj], model.lower[uj], model.upper[uj],
                                   model.is_integer[uj] != 0, model.col_meta[uj]);
      sources.push_back(j);
      continue;
    }
    const auto& members = groups[static_cast<std::size_t>(g)];
    if (j != *std::min_element(members.begin(), members.end())) continue;
    double lo = 0.0;
    double hi = 0.0;
    ColumnMeta meta;
    meta.kind = ColumnKind::kPackage;
    meta.arc = model.col_meta[uj].arc;
    for (int c : members) {
      const auto uc = static_cast<std::size_t>(c);
      lo += model.lower[uc];
      hi += model.upper[uc];
      const ColumnMeta& cm = model.col_meta[uc];
      meta.commodities.insert(meta.commodities.end(), cm.commodities.begin(), cm.commodities.end());
    }
    std::sort(meta.commodities.begin(), meta.commodities.end());
    new_index[uj] = b.add_column(model.objective[uj], lo, hi, false, std::move(meta));
    sources.push_back(j);
  }
  const SparseMatrix at = model.a.transpose();
  for (int i = 0; i < model.rows(); ++i) {
    const auto ui = static_cast<std::size_t>(i);
    std::vector<std::pair<int, double>> entries;
    for (SparseMatrix::InnerIterator it(at, i); it; ++it) {
      const int ni = new_index[static_cast<std::size_t>(it.row())];
      if (ni >= 0) entries.emplace_back(ni, it.value());
    }
    b.add_row(model.sense[ui], model.rhs[ui], entries, model.row_meta[ui]);
  }
  MilpModel out = std::move(b).finish(model.name);
  out.objective_offset = model.objective_offset;
  if (!model.row_names.empty()) out.row_names = model.row_names;
  return out;
}

// ---- whole-model pass -------------------------------------------------------

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }
};

}  // namespace

PackResult apply_packing_plan(const MilpModel& full, PackingPlan plan, double rel_tol) {
  if (plan.empty()) return {std::move(plan), full};
  const auto cols = column_index(full);
  std::map<std::tuple<int, int, int>, int> balance_row;
  for (int i = 0; i < full.rows(); ++i) {
    const RowMeta& rm = full.row_meta[static_cast<std::size_t>(i)];
    if (rm.family == RowFamily::kMassBalance && rm.commodities.size() == 1) {
      balance_row[{rm.node, rm.step, rm.commodities.front()}] = i;
    }
  }
  for (const ArcPacking& ap : plan.arcs) {
    for (const auto& pkg : ap.selected) {
      for (int q : pkg) {
        if (q < 0 || q >= static_cast<int>(ap.commodities.size()) ||
            !cols.count({ap.arc, ap.commodities[static_cast<std::size_t>(q)]})) {
          throw Error(Errc::kPlanModelMismatch, "plan names a column the model does not have (arc " +
                                                    std::to_string(ap.arc) + ")");
        }
      }
    }
  }

  for (;;) {
    UnionFind uf(full.rows());
    for (const ArcPacking& ap : plan.arcs) {
      for (const auto& pkg : ap.selected) {
        for (const auto& [node, step] : {std::pair{ap.from, ap.depart}, std::pair{ap.to, ap.arrive}}) {
          int anchor = -1;
          for (int q : pkg) {
            auto it = balance_row.find({node, step, ap.commodities[static_cast<std::size_t>(q)]});
            if (it == balance_row.end()) continue;
            if (anchor < 0) {
              anchor = it->second;
            } else {
              uf.unite(anchor, it->second);
            }
          }
        }
      }
    }
    std::map<int, std::vector<int>> sets;
    for (int i = 0; i < full.rows(); ++i) sets[uf.find(i)].push_back(i);
    std::vector<std::vector<int>> groups;
    for (auto& [root, members] : sets) {
      if (members.size() > 1) groups.push_back(std::move(members));
    }
    MilpModel f2 = aggregate_rows(full, groups);

    std::vector<std::vector<int>> packages;
    bool dropped = false;
    for (auto ait = plan.arcs.begin(); ait != plan.arcs.end();) {
      ArcPacking& ap = *ait;
      for (auto pit = ap.selected.begin(); pit != ap.selected.end();) {
        std::vector<int> cs;
        for (int q : *pit) cs.push_back(cols.at({ap.arc, ap.commodities[static_cast<std::size_t>(q)]}));
        if (check_column_set(f2, cs, rel_tol).ok) {
          packages.push_back(std::move(cs));
          ++pit;
        } else {
          std::vector<int> ids;
          for (int q : *pit) ids.push_back(ap.commodities[static_cast<std::size_t>(q)]);
          plan.rejected.emplace_back(ap.arc, std::move(ids));
          pit = ap.selected.erase(pit);
          dropped = true;
        }
      }
      if (ap.selected.empty()) {
        plan.arcs_without_packables.push_back(ap.arc);
        ait = plan.arcs.erase(ait);
      } else {
        ap.g = build_aggregation_matrix(ap.selected, static_cast<int>(ap.commodities.size()));
        ++ait;
      }
    }
    if (dropped) {
      std::sort(plan.arcs_without_packables.begin(), plan.arcs_without_packables.end());
      if (plan.empty()) return {std::move(plan), full};
      continue;
    }
    MilpModel f3 = pack_variables(f2, packages, rel_tol);
    f3.name = "multi_fidelity";
    return {std::move(plan), std::move(f3)};
  }
}

PackResult pack_model(const MilpModel& full, const Scenario& s) {
  const CompiledScenario cs = compile_scenario(s);
  const PackingOptions opt = packing_options(s);
  return apply_packing_plan(full, plan_packing(cs, opt), opt.rel_tol);
}

MilpModel build_multifidelity(const Scenario& s, const PackingPlan& plan) {
  const CompiledScenario cs = compile_scenario(s);
  MilpModel full = assemble_model(cs, "full_size");
  if (plan.commodity_count != static_cast<int>(cs.space.size()) ||
      plan.arc_count != static_cast<int>(cs.arcs.size())) {
    throw Error(Errc::kPlanModelMismatch, "plan was built for a different scenario");
  }
  for (const ArcPacking& ap : plan.arcs) {
    if (ap.arc < 0 || ap.arc >= plan.arc_count ||
        ap.commodities != cs.arcs[static_cast<std::size_t>(ap.arc)].commodities) {
      throw Error(Errc::kPlanModelMismatch, "plan arc " + std::to_string(ap.arc) + " does not match the model");
    }
  }
  return apply_packing_plan(full, plan, s.fidelity.coefficient_rel_tol).model;
}

std::string packing_plan_json(const PackingPlan& plan, const CommoditySpace& space,
                              const TimeExpandedGraph& graph) {
  using nlohmann::json;
  auto names = [&](const ArcPacking& ap, const Partition& p) {
    json out = json::array();
    for (const auto& g : p) {
      json set = json::array();
      for (int q : g) set.push_back(space[static_cast<std::size_t>(ap.commodities[static_cast<std::size_t>(q)])].id);
      out.push_back(set);
    }
    return out;
  };
  json arcs = json::array();
  int removed = 0;
  for (const ArcPacking& ap : plan.arcs) {
    const Arc& arc = graph.arcs()[static_cast<std::size_t>(ap.arc)];
    json j;
    j["arc"] = ap.arc;
    j["kind"] = arc.is_holdover() ? "holdover" : "transport";
    j["from"] = graph.nodes()[static_cast<std::size_t>(arc.from)].id;
    j["to"] = graph.nodes()[static_cast<std::size_t>(arc.to)].id;
    j["depart_step"] = arc.depart;
    j["arrive_step"] = arc.arrive;
    j["window_open"] = arc.window_open;
    j["sigma0_eligibility"] = names(ap, ap.sigma0);
    j["sigma1_cost"] = names(ap, ap.sigma1);
    j["sigma2_transformation"] = names(ap, ap.sigma2);
    j["sigma3_concurrency"] = names(ap, ap.sigma3);
    j["zeta"] = names(ap, ap.zeta);
    j["selected"] = names(ap, ap.selected);
    j["G_rows"] = ap.g.k;
    j["G_cols"] = ap.g.r;
    j["N"] = ap.g.n;
    j["L"] = ap.g.l;
    j["R"] = ap.g.r;
    j["K"] = ap.g.k;
    removed += ap.g.r - ap.g.k;
    arcs.push_back(j);
  }
  json rejected = json::array();
  for (const auto& [arc, ids] : plan.rejected) {
    json set = json::array();
    for (int k : ids) set.push_back(space[static_cast<std::size_t>(k)].id);
    rejected.push_back({{"arc", arc}, {"commodities", set}});
  }
  json doc;
  doc["commodities"] = plan.commodity_count;
  doc["arcs_total"] = plan.arc_count;
  doc["arcs_packed"] = plan.arcs.size();
  doc["arcs_without_packables"] = plan.arcs_without_packables.size();
  doc["columns_removed"] = removed;
  doc["rejected_sets"] = rejected;
  doc["arcs"] = arcs;
  return doc.dump(2) + "\n";
}

}  // namespace spacelog
