#include "spacelog/formulation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "spacelog/error.hpp"

namespace spacelog {

namespace {

std::vector<IsruCatalogEntry> site_entries(const Scenario& s, const SiteSpec& site) {
  std::vector<IsruCatalogEntry> out;
  for (const auto& id : site.infrastructure) out.push_back(*s.find_isru(id));
  return out;
}

// Concurrency rows from -F that only restate a variable bound are dropped.
void append_nonneg_rows(const Matrix& f, const std::vector<std::string>& ids,
                        std::vector<Eigen::RowVectorXd>& rows, std::vector<std::string>& labels) {
  const Matrix neg = nonneg_inflow_rows(f);
  for (Eigen::Index r = 0; r < neg.rows(); ++r) {
    if (is_trivial_nonneg_row(neg, r)) continue;
    rows.push_back(neg.row(r));
    labels.push_back("inflow:" + ids[static_cast<std::size_t>(r)]);
  }
}

Matrix restrict(const Matrix& full, const std::vector<int>& rows, const std::vector<int>& cols) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = full(rows[i], cols[j]);
    }
  }
  return out;
}

Matrix stack(const std::vector<Eigen::RowVectorXd>& rows, Eigen::Index cols) {
  Matrix h(static_cast<Eigen::Index>(rows.size()), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) h.row(static_cast<Eigen::Index>(i)) = rows[i];
  return h;
}

ArcPhysics transport_physics(const CompiledScenario& cs, const Arc& arc) {
  const Scenario& s = cs.scenario;
  const CommoditySpace& space = cs.space;
  const VehicleSpec& v = s.vehicles[static_cast<std::size_t>(arc.vehicle)];
  const TransportEdge& edge = s.edges[static_cast<std::size_t>(arc.edge)];

  ArcPhysics p;
  for (std::size_t k = 0; k < space.size(); ++k) {
    const Commodity& c = space[k];
    if (c.category == CommodityCategory::kVehicle && c.id != v.id) continue;
    p.commodities.push_back(static_cast<int>(k));
  }
  const Matrix f_full = burn_matrix(v, edge.delta_v_kms, space);
  p.f = restrict(f_full, p.commodities, p.commodities);

  const bool charged = edge.from == s.objective.from && edge.to == s.objective.to;
  p.cost = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p.commodities.size()));
  std::vector<std::string> ids;
  for (std::size_t q = 0; q < p.commodities.size(); ++q) {
    const Commodity& c = space[static_cast<std::size_t>(p.commodities[q])];
    ids.push_back(c.id);
    if (!charged) continue;
    if (c.is_massed()) p.cost(static_cast<Eigen::Index>(q)) = 1.0;
    if (c.id == v.id) p.cost(static_cast<Eigen::Index>(q)) = v.structure_mass;
  }

  std::vector<Eigen::RowVectorXd> rows;
  const Matrix cap = capacity_rows(v, space);
  const std::vector<int> all_rows = {0, 1};
  const Matrix cap_local = restrict(cap, all_rows, p.commodities);
  rows.push_back(cap_local.row(0));
  p.h_labels.push_back("payload");
  rows.push_back(cap_local.row(1));
  p.h_labels.push_back("propellant");
  append_nonneg_rows(p.f, ids, rows, p.h_labels);
  p.h = stack(rows, static_cast<Eigen::Index>(p.commodities.size()));
  return p;
}

ArcPhysics holdover_physics(const CompiledScenario& cs, const Arc& arc) {
  const Scenario& s = cs.scenario;
  const CommoditySpace& space = cs.space;
  const auto r = static_cast<Eigen::Index>(space.size());
  ArcPhysics p;
  p.commodities.resize(space.size());
  std::iota(p.commodities.begin(), p.commodities.end(), 0);
  p.cost = Eigen::VectorXd::Zero(r);
  const SiteSpec* site = s.find_site(s.nodes[static_cast<std::size_t>(arc.from)].id);
  if (!site) {
    p.f = Matrix::Identity(r, r);
    p.h = Matrix::Zero(0, r);
    return p;
  }
  p.at_site = true;
  const auto entries = site_entries(s, *site);
  const double hours = s.step_days * 24.0;
  const double solar = s.operations.solar_day_hours;
  p.f = production_matrix(entries, hours, space, solar, site->internal_resources);

  std::vector<int> plants;
  for (const auto& id : site->infrastructure) plants.push_back(space.require(id));
  if (!site->power.empty()) plants.push_back(space.require(site->power));
  if (!site->energy_storage.empty()) plants.push_back(space.require(site->energy_storage));
  const double coef = maintenance_coefficient(s.operations.maintenance_rate_per_year, s.step_days);
  if (coef != 0.0) apply_maintenance(p.f, space.require(s.operations.spare_commodity), plants, coef);

  std::vector<std::string> ids;
  for (std::size_t k = 0; k < space.size(); ++k) ids.push_back(space[k].id);
  std::vector<Eigen::RowVectorXd> rows;

  const double elapsed = cs.graph.grid().steps[static_cast<std::size_t>(arc.depart)];
  if (!site->power.empty()) {
    const PowerCatalogEntry& power = *s.find_power(site->power);
    const double p0 = degraded_output(power, elapsed, solar);
    const EnergyStorageEntry* es =
        site->energy_storage.empty() ? nullptr : s.find_energy_storage(site->energy_storage);
    const double eps = es ? es->efficiency : 1.0;
    rows.push_back(power_supply_row(entries, power, p0, eps, space).row(0));
    p.h_labels.push_back("power");
    if (es) {
      rows.push_back(energy_storage_row(entries, power, p0, *es, space).row(0));
      p.h_labels.push_back("energy_storage");
    }
  }

  std::vector<IsruCatalogEntry> tanks;
  for (const auto& e : entries) {
    if (e.role == IsruRole::kStorage) tanks.push_back(e);
  }
  const Matrix storage = storage_capacity_rows(tanks, p.f, space);
  for (std::size_t k = 0; k < tanks.size(); ++k) {
    Eigen::RowVectorXd row = storage.row(static_cast<Eigen::Index>(k));
    // Parked vehicles hold their own propellant mix in their tanks.
    for (const VehicleSpec& v : s.vehicles) {
      for (const auto& pc : v.propellant_components) {
        if (pc.commodity == tanks[k].reference_product) {
          row(space.require(v.id)) -= pc.fraction * v.propellant_capacity;
        }
      }
    }
    rows.push_back(row);
    p.h_labels.push_back("storage:" + tanks[k].reference_product);
  }

  const Matrix internal = internal_balance_rows(entries, hours, space, solar, site->internal_resources);
  for (Eigen::Index k = 0; k < internal.rows(); ++k) {
    rows.push_back(internal.row(k));
    p.h_labels.push_back("internal:" + site->internal_resources[static_cast<std::size_t>(k)]);
  }
  append_nonneg_rows(p.f, ids, rows, p.h_labels);
  p.h = stack(rows, r);
  return p;
}

}  // namespace

CompiledScenario compile_scenario(const Scenario& s) {
  ValidationResult v = validate_scenario(s);
  if (!v.ok()) {
    throw Error(Errc::kInvalidScenario, v.errors.front(), v.errors);
  }
  CompiledScenario cs;
  cs.scenario = s;
  cs.space = s.space();
  const TimeGrid grid = s.grid();
  cs.graph = expand(s.nodes, s.edges, s.vehicles, grid);
  cs.arcs.reserve(cs.graph.arcs().size());
  for (const Arc& arc : cs.graph.arcs()) {
    cs.arcs.push_back(arc.is_holdover() ? holdover_physics(cs, arc) : transport_physics(cs, arc));
  }
  for (const DemandEntry& d : s.demands) {
    const int node = cs.graph.node_index(d.node);
    const int t = *grid.index_of(d.day);
    cs.d[{node, t, cs.space.require(d.commodity)}] += d.amount;
  }
  for (const UnboundedSupply& u : s.unbounded_supplies) {
    const int node = cs.graph.node_index(u.node);
    for (const std::string& c : u.commodities) {
      const int k = cs.space.require(c);
      for (int t = 0; t < static_cast<int>(grid.size()); ++t) cs.d[{node, t, k}] += u.cap;
    }
  }
  return cs;
}

MilpModel assemble_model(const CompiledScenario& cs, const std::string& name) {
  const auto& arcs = cs.graph.arcs();
  const int n_nodes = static_cast<int>(cs.graph.nodes().size());
  const int n_steps = static_cast<int>(cs.graph.grid().size());
  const int r = static_cast<int>(cs.space.size());

  ModelBuilder b;
  std::vector<std::vector<int>> col(arcs.size());
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    const ArcPhysics& p = cs.arcs[a];
    const bool closed = !arcs[a].is_holdover() && !arcs[a].window_open;
    for (std::size_t q = 0; q < p.commodities.size(); ++q) {
      const int k = p.commodities[q];
      const Commodity& c = cs.space[static_cast<std::size_t>(k)];
      ColumnMeta meta;
      meta.kind = ColumnKind::kCommodity;
      meta.arc = static_cast<int>(a);
      meta.commodities = {k};
      col[a].push_back(b.add_column(p.cost(static_cast<Eigen::Index>(q)), 0.0, closed ? 0.0 : kInf,
                                    c.kind == CommodityKind::kDiscrete, std::move(meta)));
    }
  }

  auto key = [&](int node, int t, int k) {
    return (static_cast<std::size_t>(node) * static_cast<std::size_t>(n_steps) +
            static_cast<std::size_t>(t)) * static_cast<std::size_t>(r) + static_cast<std::size_t>(k);
  };
  std::vector<std::vector<std::pair<int, double>>> balance(
      static_cast<std::size_t>(n_nodes) * static_cast<std::size_t>(n_steps) * static_cast<std::size_t>(r));
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    const Arc& arc = arcs[a];
    const ArcPhysics& p = cs.arcs[a];
    for (std::size_t q = 0; q < p.commodities.size(); ++q) {
      balance[key(arc.from, arc.depart, p.commodities[q])].emplace_back(col[a][q], 1.0);
    }
    for (std::size_t row = 0; row < p.commodities.size(); ++row) {
      auto& entries = balance[key(arc.to, arc.arrive, p.commodities[row])];
      for (std::size_t q = 0; q < p.commodities.size(); ++q) {
        const double v = p.f(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(q));
        if (v != 0.0) entries.emplace_back(col[a][q], -v);
      }
    }
  }
  for (int node = 0; node < n_nodes; ++node) {
    for (int t = 0; t < n_steps; ++t) {
      for (int k = 0; k < r; ++k) {
        auto& entries = balance[key(node, t, k)];
        auto it = cs.d.find({node, t, k});
        const double rhs = it == cs.d.end() ? 0.0 : it->second;
        if (entries.empty() && rhs >= 0.0) continue;
        RowMeta meta;
        meta.family = RowFamily::kMassBalance;
        meta.node = node;
        meta.step = t;
        meta.commodities = {k};
        b.add_row(RowSense::kLe, rhs, entries, std::move(meta));
      }
    }
  }

  for (std::size_t a = 0; a < arcs.size(); ++a) {
    if (!arcs[a].is_holdover() && !arcs[a].window_open) continue;
    const ArcPhysics& p = cs.arcs[a];
    for (Eigen::Index row = 0; row < p.h.rows(); ++row) {
      std::vector<std::pair<int, double>> entries;
      for (Eigen::Index q = 0; q < p.h.cols(); ++q) {
        if (p.h(row, q) != 0.0) entries.emplace_back(col[a][static_cast<std::size_t>(q)], p.h(row, q));
      }
      if (entries.empty()) continue;
      RowMeta meta;
      meta.family = RowFamily::kConcurrency;
      meta.arc = static_cast<int>(a);
      meta.label = p.h_labels[static_cast<std::size_t>(row)];
      b.add_row(RowSense::kLe, 0.0, entries, std::move(meta));
    }
  }
  return std::move(b).finish(name);
}

MilpModel build_full_size(const Scenario& s) { return assemble_model(compile_scenario(s), "full_size"); }

std::map<std::pair<int, int>, int> column_index(const MilpModel& m) {
  std::map<std::pair<int, int>, int> idx;
  for (int j = 0; j < m.cols(); ++j) {
    const ColumnMeta& c = m.col_meta[static_cast<std::size_t>(j)];
    if (c.kind == ColumnKind::kCommodity && c.commodities.size() == 1) {
      idx[{c.arc, c.commodities.front()}] = j;
    }
  }
  return idx;
}

// ---- prefixed ---------------------------------------------------------------

PrefixedRatios derive_prefixed_ratios(const Scenario& s) {
  if (!s.fidelity.prefixed) {
    throw Error(Errc::kUnderdeterminedReference, "scenario has no prefixed reference");
  }
  const PrefixedSpec& spec = *s.fidelity.prefixed;
  const SiteSpec* site = s.find_site(spec.site);
  if (!site) throw Error(Errc::kUnderdeterminedReference, "'" + spec.site + "' is not a site");
  if (!(spec.reference_rate_kg_per_hr > 0.0) || spec.reference_product.empty()) {
    throw Error(Errc::kUnderdeterminedReference, "no positive reference production rate");
  }
  const auto entries = site_entries(s, *site);
  const double solar = s.operations.solar_day_hours;

  std::map<std::string, double> mass;  // plant id -> kg
  auto net_rate = [&](const std::string& product) {
    double net = 0.0;
    for (const auto& e : entries) {
      auto m = mass.find(e.id);
      if (m == mass.end()) continue;
      const double duty = e.operating_hours_per_solar_day / solar;
      if (auto it = e.production.find(product); it != e.production.end()) net += it->second * m->second * duty;
      if (auto it = e.consumption.find(product); it != e.consumption.end()) net -= it->second * m->second * duty;
    }
    return net;
  };

  bool sized_reference = false;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& e : entries) {
      if (e.role == IsruRole::kStorage || mass.count(e.id)) continue;
      const auto alpha = e.production.find(e.reference_product);
      if (alpha == e.production.end() || !(alpha->second > 0.0)) continue;
      double deficit = -net_rate(e.reference_product);
      if (e.reference_product == spec.reference_product) deficit += spec.reference_rate_kg_per_hr;
      if (deficit <= 0.0) continue;
      const double duty = e.operating_hours_per_solar_day / solar;
      mass[e.id] = deficit / (alpha->second * duty);
      if (e.reference_product == spec.reference_product) sized_reference = true;
      changed = true;
    }
  }
  if (!sized_reference) {
    throw Error(Errc::kUnderdeterminedReference,
                "no plant at '" + spec.site + "' produces '" + spec.reference_product + "'");
  }

  const double interval_hours = s.operations.launch_interval_days * 24.0;
  for (const auto& e : entries) {
    if (e.role != IsruRole::kStorage) continue;
    const double held = std::max(0.0, net_rate(e.reference_product)) * interval_hours;
    mass[e.id] = held * spec.storage_scale * e.specific_mass;
  }

  double power_mass = 0.0;
  double storage_mass = 0.0;
  if (!site->power.empty()) {
    const PowerCatalogEntry& power = *s.find_power(site->power);
    const EnergyStorageEntry* es =
        site->energy_storage.empty() ? nullptr : s.find_energy_storage(site->energy_storage);
    const double eps = es ? es->efficiency : 1.0;
    const double qp = power.working_hours_per_solar_day;
    const double p0 = power.output_kw_per_kg();
    double demand = 0.0;
    double base = 0.0;
    for (const auto& e : entries) {
      const double m = mass.count(e.id) ? mass[e.id] : 0.0;
      demand += e.power_per_kg() * (1.0 + (e.operating_hours_per_solar_day - qp) / (eps * qp)) * m;
      base += e.power_per_kg() * m;
    }
    power_mass = demand / p0;
    if (es) {
      storage_mass = std::max(0.0, eps * qp * (p0 * power_mass - base) / es->specific_energy_kwh_per_kg);
    }
  }

  PrefixedRatios::Bundle bundle;
  bundle.id = spec.bundle_id;
  bundle.site = spec.site;
  for (const auto& id : site->infrastructure) bundle.fractions.emplace_back(id, mass.count(id) ? mass[id] : 0.0);
  if (!site->power.empty()) bundle.fractions.emplace_back(site->power, power_mass);
  if (!site->energy_storage.empty()) bundle.fractions.emplace_back(site->energy_storage, storage_mass);
  double total = 0.0;
  for (const auto& [id, m] : bundle.fractions) total += m;
  for (auto& [id, m] : bundle.fractions) m /= total;
  PrefixedRatios out;
  out.bundles.push_back(std::move(bundle));
  return out;
}

namespace {

using SparseCol = std::vector<std::pair<int, double>>;

SparseCol column_of(const SparseMatrix& a, int j) {
  SparseCol c;
  for (SparseMatrix::InnerIterator it(a, j); it; ++it) c.emplace_back(static_cast<int>(it.row()), it.value());
  return c;
}

bool rows_match(const SparseCol& x, const SparseCol& y) {
  if (x.size() != y.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].first != y[i].first) return false;
    const double scale = std::max(std::fabs(x[i].second), std::fabs(y[i].second));
    if (std::fabs(x[i].second - y[i].second) > 1e-12 * scale) return false;
  }
  return true;
}

}  // namespace

MilpModel build_prefixed(const Scenario& s, const PrefixedRatios& ratios) {
  const CompiledScenario cs = compile_scenario(s);
  MilpModel full = assemble_model(cs, "prefixed");

  // Requested bundles: one per prefixed reference in the scenario.
  std::vector<const PrefixedRatios::Bundle*> bundles;
  if (s.fidelity.prefixed) {
    const PrefixedSpec& spec = *s.fidelity.prefixed;
    const PrefixedRatios::Bundle* found = nullptr;
    for (const auto& b : ratios.bundles) {
      if (b.site == spec.site) found = &b;
    }
    if (!found) throw Error(Errc::kRatiosIncomplete, "no ratios for the bundle at '" + spec.site + "'");
    bundles.push_back(found);
  }
  std::map<int, std::pair<int, double>> member;  // commodity -> (bundle, ratio)
  for (std::size_t bi = 0; bi < bundles.size(); ++bi) {
    double sum = 0.0;
    for (const auto& [id, r] : bundles[bi]->fractions) {
      const int k = cs.space.index_of(id);
      if (k < 0) throw Error(Errc::kRatiosIncomplete, "unknown subsystem '" + id + "'");
      if (!cs.space[static_cast<std::size_t>(k)].is_infrastructure() ||
          cs.space[static_cast<std::size_t>(k)].kind != CommodityKind::kContinuous) {
        throw Error(Errc::kRatiosIncomplete, "'" + id + "' is not a continuous infrastructure commodity");
      }
      if (r < 0.0) throw Error(Errc::kRatiosIncomplete, "negative fraction for '" + id + "'");
      if (!member.emplace(k, std::make_pair(static_cast<int>(bi), r)).second) {
        throw Error(Errc::kRatiosIncomplete, "'" + id + "' appears in two bundles");
      }
      sum += r;
    }
    if (std::fabs(sum - 1.0) > 1e-9) {
      throw Error(Errc::kRatiosIncomplete, "fractions of '" + bundles[bi]->id + "' sum to " + std::to_string(sum));
    }
  }
  // Site infrastructure left out of a bundle is not deployable at this fidelity.
  if (s.fidelity.prefixed) {
    const SiteSpec& site = *s.find_site(s.fidelity.prefixed->site);
    std::vector<std::string> ids = site.infrastructure;
    if (!site.power.empty()) ids.push_back(site.power);
    if (!site.energy_storage.empty()) ids.push_back(site.energy_storage);
    for (const auto& id : ids) member.emplace(cs.space.require(id), std::make_pair(0, 0.0));
  }
  if (member.empty()) return full;

  // Column substitution.
  ModelBuilder b;
  const int m_rows = full.rows();
  std::vector<SparseCol> new_cols;
  std::map<std::pair<int, int>, int> bundle_col;  // (arc, bundle) -> new column
  for (int j = 0; j < full.cols(); ++j) {
    const ColumnMeta& meta = full.col_meta[static_cast<std::size_t>(j)];
    const int k = meta.commodities.front();
    auto mem = member.find(k);
    if (mem == member.end()) {
      new_cols.push_back(column_of(full.a, j));
      b.add_column(full.objective[static_cast<std::size_t>(j)], full.lower[static_cast<std::size_t>(j)],
                   full.upper[static_cast<std::size_t>(j)], full.is_integer[static_cast<std::size_t>(j)] != 0, meta);
      continue;
    }
    const auto [bi, ratio] = mem->second;
    if (ratio == 0.0) continue;
    const std::pair<int, int> key{meta.arc, bi};
    if (bundle_col.count(key)) continue;
    // First member on this arc: build the whole bundle column now.
    std::map<int, double> acc, mag;
    double cost = 0.0;
    double upper = 0.0;
    ColumnMeta bm;
    bm.kind = ColumnKind::kBundle;
    bm.arc = meta.arc;
    bm.label = bundles[static_cast<std::size_t>(bi)]->id;
    for (int jj = j; jj < full.cols(); ++jj) {
      const ColumnMeta& mm = full.col_meta[static_cast<std::size_t>(jj)];
      if (mm.arc != meta.arc) break;
      auto it = member.find(mm.commodities.front());
      if (it == member.end() || it->second.first != bi || it->second.second == 0.0) continue;
      const double rs = it->second.second;
      bm.commodities.push_back(mm.commodities.front());
      bm.weights.push_back(rs);
      cost += rs * full.objective[static_cast<std::size_t>(jj)];
      upper = std::max(upper, full.upper[static_cast<std::size_t>(jj)]);
      for (SparseMatrix::InnerIterator e(full.a, jj); e; ++e) {
        acc[static_cast<int>(e.row())] += rs * e.value();
        mag[static_cast<int>(e.row())] += std::fabs(rs * e.value());
      }
    }
    SparseCol c;
    for (const auto& [row, v] : acc) {
      if (std::fabs(v) > 1e-12 * mag[row]) c.emplace_back(row, v);
    }
    bundle_col[key] = b.add_column(cost, 0.0, upper, false, std::move(bm));
    new_cols.push_back(std::move(c));
  }

  // Row pass: transpose the substituted columns.
  std::vector<SparseCol> row_entries(static_cast<std::size_t>(m_rows));
  for (std::size_t j = 0; j < new_cols.size(); ++j) {
    for (const auto& [row, v] : new_cols[j]) row_entries[static_cast<std::size_t>(row)].emplace_back(static_cast<int>(j), v);
  }
  std::vector<char> keep(static_cast<std::size_t>(m_rows), 1);
  std::vector<double> rhs = full.rhs;
  std::vector<RowMeta> metas = full.row_meta;
  // Subsystem mass-balance rows: scale to bundle units, merge identical ones.
  std::map<std::pair<int, int>, std::vector<int>> by_slot;
  for (int i = 0; i < m_rows; ++i) {
    const RowMeta& rm = full.row_meta[static_cast<std::size_t>(i)];
    if (rm.family != RowFamily::kMassBalance) continue;
    auto mem = member.find(rm.commodities.front());
    if (mem == member.end()) continue;
    const double rs = mem->second.second;
    auto& entries = row_entries[static_cast<std::size_t>(i)];
    if (rs == 0.0 || entries.empty()) {
      if (full.rhs[static_cast<std::size_t>(i)] >= 0.0) keep[static_cast<std::size_t>(i)] = 0;
      continue;
    }
    for (auto& e : entries) e.second /= rs;
    rhs[static_cast<std::size_t>(i)] /= rs;
    auto& slot = by_slot[{rm.node, rm.step}];
    bool merged = false;
    for (int other : slot) {
      if (rows_match(row_entries[static_cast<std::size_t>(other)], entries)) {
        rhs[static_cast<std::size_t>(other)] = std::min(rhs[static_cast<std::size_t>(other)], rhs[static_cast<std::size_t>(i)]);
        metas[static_cast<std::size_t>(other)].commodities.push_back(rm.commodities.front());
        keep[static_cast<std::size_t>(i)] = 0;
        merged = true;
        break;
      }
    }
    if (!merged) slot.push_back(i);
  }
  for (int i = 0; i < m_rows; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    if (!keep[ui]) continue;
    if (row_entries[ui].empty() && rhs[ui] >= 0.0) continue;
    b.add_row(full.sense[ui], rhs[ui], row_entries[ui], metas[ui]);
  }
  return std::move(b).finish("prefixed");
}

}  // namespace spacelog
