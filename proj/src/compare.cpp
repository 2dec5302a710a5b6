#include "spacelog/compare.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <map>
#include <sstream>

#include "spacelog/error.hpp"
#include "spacelog/io.hpp"
#include "spacelog/packing.hpp"

namespace spacelog {

using nlohmann::json;

const char* fidelity_name(Fidelity f) {
  switch (f) {
    case Fidelity::kPrefixed: return "prefixed";
    case Fidelity::kFullSize: return "full_size";
    case Fidelity::kMultiFidelity: return "multi_fidelity";
  }
  return "full_size";
}

Fidelity fidelity_from_name(const std::string& s) {
  if (s == "prefixed") return Fidelity::kPrefixed;
  if (s == "full" || s == "full_size") return Fidelity::kFullSize;
  if (s == "multi" || s == "multi_fidelity") return Fidelity::kMultiFidelity;
  throw Error(Errc::kParseError, "unknown fidelity '" + s + "'");
}

MilpModel build_fidelity(const Scenario& s, Fidelity f, PackingPlan* plan_out) {
  switch (f) {
    case Fidelity::kPrefixed: return build_prefixed(s, derive_prefixed_ratios(s));
    case Fidelity::kFullSize: return build_full_size(s);
    case Fidelity::kMultiFidelity: {
      PackResult r = pack_model(build_full_size(s), s);
      if (plan_out) *plan_out = std::move(r.plan);
      return std::move(r.model);
    }
  }
  throw Error(Errc::kParseError, "unknown fidelity");
}

const FidelityResult& ComparisonReport::result(Fidelity f) const {
  for (const auto& r : results) {
    if (r.fidelity == f) return r;
  }
  throw Error(Errc::kDimensionMismatch, std::string("report lacks ") + fidelity_name(f));
}

namespace {

const FidelityResult* find_result(const ComparisonReport& r, Fidelity f) {
  for (const auto& x : r.results) {
    if (x.fidelity == f) return &x;
  }
  return nullptr;
}

bool solved(const FidelityResult* r) { return r && r->status == "optimal" && r->objective.has_value(); }

std::string fmt_num(double v, int prec) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

}  // namespace

void fill_relative_columns(ComparisonReport& report) {
  const FidelityResult* fs = find_result(report, Fidelity::kFullSize);
  const bool base_cost = fs && fs->objective && *fs->objective != 0.0;
  const bool base_time = fs && fs->built && fs->solve_seconds > 0.0;
  const double j_fs = base_cost ? *fs->objective : 0.0;
  const double t_fs = base_time ? fs->solve_seconds : 0.0;
  for (auto& r : report.results) {
    r.cost_error_pct.reset();
    r.time_reduction_pct.reset();
    if (base_cost && r.objective) r.cost_error_pct = (*r.objective - j_fs) / j_fs * 100.0;
    if (base_time && r.built && !r.status.empty()) r.time_reduction_pct = (r.solve_seconds - t_fs) / t_fs * 100.0;
  }
}

void check_ordering(ComparisonReport& report, double rel_tol) {
  const FidelityResult* pf = find_result(report, Fidelity::kPrefixed);
  const FidelityResult* fs = find_result(report, Fidelity::kFullSize);
  const FidelityResult* mf = find_result(report, Fidelity::kMultiFidelity);
  int checked = 0;
  bool ok = true;
  if (solved(mf) && solved(fs)) {
    ++checked;
    if (*mf->objective > *fs->objective + rel_tol * std::fabs(*fs->objective)) {
      ok = false;
      report.notes.push_back("multi_fidelity objective exceeds full_size");
    }
  } else {
    report.notes.push_back("multi_fidelity vs full_size not compared: both must be optimal");
  }
  if (solved(fs) && solved(pf)) {
    ++checked;
    if (*fs->objective > *pf->objective + rel_tol * std::fabs(*pf->objective)) {
      ok = false;
      report.notes.push_back("full_size objective exceeds prefixed");
    }
  } else if (pf && pf->status == "infeasible") {
    report.notes.push_back("prefixed infeasible; ordering restricted to multi_fidelity <= full_size");
  } else {
    report.notes.push_back("full_size vs prefixed not compared: both must be optimal");
  }
  report.ordering = !ok ? "FAIL" : checked > 0 ? "PASS" : "UNCHECKED";
}

FlowLedger build_flow_ledger(const CompiledScenario& cs, const MilpModel& model,
                             const std::vector<double>& values, const std::string& fidelity, double eps) {
  if (values.size() != static_cast<std::size_t>(model.cols())) {
    throw Error(Errc::kDimensionMismatch, "ledger values do not match the model");
  }
  FlowLedger l;
  l.fidelity = fidelity;
  const auto& arcs = cs.graph.arcs();
  const auto& nodes = cs.graph.nodes();
  const auto& steps = cs.graph.grid().steps;
  std::map<std::pair<int, int>, double> peak;  // (node, commodity) -> kg
  for (int j = 0; j < model.cols(); ++j) {
    const double v = values[static_cast<std::size_t>(j)];
    if (std::fabs(v) <= eps) continue;
    const ColumnMeta& m = model.col_meta[static_cast<std::size_t>(j)];
    if (m.arc < 0 || m.arc >= static_cast<int>(arcs.size())) continue;
    const Arc& a = arcs[static_cast<std::size_t>(m.arc)];
    FlowEntry e;
    e.arc = m.arc;
    e.kind = a.is_holdover() ? "holdover" : "transport";
    if (a.vehicle >= 0) e.vehicle = cs.scenario.vehicles[static_cast<std::size_t>(a.vehicle)].id;
    e.from = nodes[static_cast<std::size_t>(a.from)].id;
    e.to = nodes[static_cast<std::size_t>(a.to)].id;
    e.depart_day = steps[static_cast<std::size_t>(a.depart)];
    e.arrive_day = steps[static_cast<std::size_t>(a.arrive)];
    for (int k : m.commodities) e.commodities.push_back(cs.space[static_cast<std::size_t>(k)].id);
    switch (m.kind) {
      case ColumnKind::kCommodity: e.content = "commodity"; break;
      case ColumnKind::kPackage: e.content = "package total (component split undefined)"; break;
      case ColumnKind::kBundle: e.content = "bundle " + m.label; break;
      case ColumnKind::kGeneric: e.content = "generic"; break;
    }
    e.amount = v;
    l.flows.push_back(e);

    if (!a.is_holdover()) continue;
    for (std::size_t q = 0; q < m.commodities.size(); ++q) {
      const int k = m.commodities[q];
      double amount = v;
      if (m.kind == ColumnKind::kBundle && q < m.weights.size()) amount = v * m.weights[q];
      if (m.kind == ColumnKind::kPackage) break;  // idle-holdover packages carry no split
      l.inventory.push_back({e.from, e.depart_day, cs.space[static_cast<std::size_t>(k)].id, amount});
      if (cs.space[static_cast<std::size_t>(k)].is_infrastructure() && cs.arcs[static_cast<std::size_t>(m.arc)].at_site) {
        double& p = peak[{a.from, k}];
        p = std::max(p, amount);
      }
    }
  }
  for (const auto& [key, kg] : peak) {
    l.sizing.push_back({nodes[static_cast<std::size_t>(key.first)].id, cs.space[static_cast<std::size_t>(key.second)].id, kg});
  }
  return l;
}

ComparisonOutput compare_fidelities(const Scenario& s, SolverAdapter& adapter, const SolveLimits& limits) {
  using Clock = std::chrono::steady_clock;
  ComparisonOutput out;
  ComparisonReport& rep = out.report;
  rep.scenario = s.name;
  rep.solver = adapter.name();
  const CompiledScenario cs = compile_scenario(s);
  ModelStats full_stats;
  bool have_full = false;
  for (Fidelity f : {Fidelity::kPrefixed, Fidelity::kFullSize, Fidelity::kMultiFidelity}) {
    FidelityResult r;
    r.fidelity = f;
    const auto t0 = Clock::now();
    MilpModel model;
    PackingPlan plan;
    try {
      model = build_fidelity(s, f, &plan);
      r.built = true;
    } catch (const Error& e) {
      r.error = e.what();
    }
    r.build_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    if (r.built) {
      r.stats = model_stats(model);
      if (f == Fidelity::kFullSize) {
        full_stats = r.stats;
        have_full = true;
      }
      if (f == Fidelity::kMultiFidelity) {
        rep.packing.arcs_packed = static_cast<int>(plan.arcs.size());
        rep.packing.arcs_considered = static_cast<int>(plan.arcs.size() + plan.arcs_without_packables.size());
        rep.packing.rejected_sets = static_cast<int>(plan.rejected.size());
        if (have_full) {
          rep.packing.columns_removed = full_stats.columns - r.stats.columns;
          rep.packing.rows_removed = full_stats.rows - r.stats.rows;
        }
      }
      const Solution sol = adapter.solve(model, limits);
      r.status = status_name(sol.status);
      if (sol.has_values) r.objective = sol.objective;
      if (std::isfinite(sol.bound)) r.bound = sol.bound;
      r.solve_seconds = sol.seconds;
      r.nodes = sol.nodes;
      if (sol.has_values) out.ledgers.push_back(build_flow_ledger(cs, model, sol.values, fidelity_name(f)));
    }
    rep.results.push_back(r);
  }
  fill_relative_columns(rep);
  check_ordering(rep);
  return out;
}

namespace {

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }
std::optional<double> get_opt(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

}  // namespace

std::string report_to_json(const ComparisonReport& r) {
  json j;
  j["scenario"] = r.scenario;
  j["solver"] = r.solver;
  j["ordering"] = r.ordering;
  j["notes"] = r.notes;
  j["packing"] = {{"arcs_considered", r.packing.arcs_considered},
                  {"arcs_packed", r.packing.arcs_packed},
                  {"columns_removed", r.packing.columns_removed},
                  {"rows_removed", r.packing.rows_removed},
                  {"rejected_sets", r.packing.rejected_sets}};
  json rs = json::array();
  for (const auto& x : r.results) {
    rs.push_back({{"fidelity", fidelity_name(x.fidelity)},
                  {"built", x.built},
                  {"error", x.error},
                  {"status", x.status},
                  {"objective", opt(x.objective)},
                  {"bound", opt(x.bound)},
                  {"cost_error_pct", opt(x.cost_error_pct)},
                  {"time_reduction_pct", opt(x.time_reduction_pct)},
                  {"rows", x.stats.rows},
                  {"columns", x.stats.columns},
                  {"integer_columns", x.stats.integer_columns},
                  {"nonzeros", x.stats.nonzeros},
                  {"build_seconds", x.build_seconds},
                  {"solve_seconds", x.solve_seconds},
                  {"nodes", x.nodes}});
  }
  j["results"] = rs;
  return j.dump(2) + "\n";
}

ComparisonReport report_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    ComparisonReport r;
    r.scenario = j.at("scenario").get<std::string>();
    r.solver = j.at("solver").get<std::string>();
    r.ordering = j.at("ordering").get<std::string>();
    r.notes = j.at("notes").get<std::vector<std::string>>();
    const json& p = j.at("packing");
    r.packing.arcs_considered = p.at("arcs_considered").get<int>();
    r.packing.arcs_packed = p.at("arcs_packed").get<int>();
    r.packing.columns_removed = p.at("columns_removed").get<int>();
    r.packing.rows_removed = p.at("rows_removed").get<int>();
    r.packing.rejected_sets = p.at("rejected_sets").get<int>();
    for (const json& x : j.at("results")) {
      FidelityResult f;
      f.fidelity = fidelity_from_name(x.at("fidelity").get<std::string>());
      f.built = x.at("built").get<bool>();
      f.error = x.at("error").get<std::string>();
      f.status = x.at("status").get<std::string>();
      f.objective = get_opt(x, "objective");
      f.bound = get_opt(x, "bound");
      f.cost_error_pct = get_opt(x, "cost_error_pct");
      f.time_reduction_pct = get_opt(x, "time_reduction_pct");
      f.stats.rows = x.at("rows").get<int>();
      f.stats.columns = x.at("columns").get<int>();
      f.stats.integer_columns = x.at("integer_columns").get<int>();
      f.stats.nonzeros = x.at("nonzeros").get<long long>();
      f.build_seconds = x.at("build_seconds").get<double>();
      f.solve_seconds = x.at("solve_seconds").get<double>();
      f.nodes = x.at("nodes").get<long>();
      r.results.push_back(f);
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(Errc::kParseError, std::string("report: ") + e.what());
  }
}

std::string render_table(const ComparisonReport& r) {
  std::ostringstream o;
  char line[256];
  std::snprintf(line, sizeof line, "%-16s %24s %16s %12s %20s %12s\n", "Formulation", "Mission cost (IMLEO), kg",
                "Cost error, %", "Time, s", "Time reduction, %", "Status");
  o << "Scenario: " << r.scenario << "   Solver: " << r.solver << "\n" << line;
  for (const auto& x : r.results) {
    const std::string cost = x.objective ? fmt_num(*x.objective, 1) : "-";
    const std::string err = x.cost_error_pct ? fmt_num(*x.cost_error_pct, 1) : "-";
    const std::string t = x.built ? fmt_num(x.solve_seconds, 1) : "-";
    const std::string tr = x.time_reduction_pct ? fmt_num(*x.time_reduction_pct, 1) : "-";
    const std::string st = x.built ? x.status : "build failed";
    std::snprintf(line, sizeof line, "%-16s %24s %16s %12s %20s %12s\n", fidelity_name(x.fidelity), cost.c_str(),
                  err.c_str(), t.c_str(), tr.c_str(), st.c_str());
    o << line;
  }
  o << "Columns (prefixed / full_size / multi_fidelity):";
  for (const auto& x : r.results) o << " " << x.stats.columns;
  o << "\nPacked arcs: " << r.packing.arcs_packed << " of " << r.packing.arcs_considered
    << ", columns removed: " << r.packing.columns_removed << "\n";
  o << "Bound ordering: " << r.ordering << "\n";
  for (const auto& n : r.notes) o << "  note: " << n << "\n";
  return o.str();
}

void write_report(const ComparisonReport& r, ReportFormat format, const std::filesystem::path& path) {
  write_file_atomic(path, format == ReportFormat::kJson ? report_to_json(r) : render_table(r));
}

std::string ledger_to_json(const FlowLedger& l) {
  json j;
  j["fidelity"] = l.fidelity;
  json flows = json::array();
  for (const auto& f : l.flows) {
    flows.push_back({{"arc", f.arc},
                     {"kind", f.kind},
                     {"vehicle", f.vehicle},
                     {"from", f.from},
                     {"to", f.to},
                     {"depart_day", f.depart_day},
                     {"arrive_day", f.arrive_day},
                     {"commodities", f.commodities},
                     {"content", f.content},
                     {"amount", f.amount}});
  }
  j["flows"] = flows;
  json inv = json::array();
  for (const auto& i : l.inventory) {
    inv.push_back({{"node", i.node}, {"day", i.day}, {"commodity", i.commodity}, {"amount", i.amount}});
  }
  j["inventory"] = inv;
  json siz = json::array();
  for (const auto& s : l.sizing) siz.push_back({{"node", s.node}, {"commodity", s.commodity}, {"peak_kg", s.peak_kg}});
  j["sizing"] = siz;
  return j.dump(2) + "\n";
}

FlowLedger ledger_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    FlowLedger l;
    l.fidelity = j.at("fidelity").get<std::string>();
    for (const json& f : j.at("flows")) {
      FlowEntry e;
      e.arc = f.at("arc").get<int>();
      e.kind = f.at("kind").get<std::string>();
      e.vehicle = f.at("vehicle").get<std::string>();
      e.from = f.at("from").get<std::string>();
      e.to = f.at("to").get<std::string>();
      e.depart_day = f.at("depart_day").get<double>();
      e.arrive_day = f.at("arrive_day").get<double>();
      e.commodities = f.at("commodities").get<std::vector<std::string>>();
      e.content = f.at("content").get<std::string>();
      e.amount = f.at("amount").get<double>();
      l.flows.push_back(e);
    }
    for (const json& i : j.at("inventory")) {
      l.inventory.push_back({i.at("node").get<std::string>(), i.at("day").get<double>(),
                             i.at("commodity").get<std::string>(), i.at("amount").get<double>()});
    }
    for (const json& s : j.at("sizing")) {
      l.sizing.push_back({s.at("node").get<std::string>(), s.at("commodity").get<std::string>(),
                          s.at("peak_kg").get<double>()});
    }
    return l;
  } catch (const json::exception& e) {
    throw Error(Errc::kParseError, std::string("ledger: ") + e.what());
  }
}

}  // namespace spacelog
