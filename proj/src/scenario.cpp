#include "spacelog/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <set>
#include <sstream>

#include "spacelog/error.hpp"
#include "spacelog/io.hpp"

namespace spacelog {

using nlohmann::json;

const IsruCatalogEntry* Scenario::find_isru(const std::string& id) const {
  for (const auto& e : isru_catalog) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

const PowerCatalogEntry* Scenario::find_power(const std::string& id) const {
  for (const auto& e : power_catalog) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

const EnergyStorageEntry* Scenario::find_energy_storage(const std::string& id) const {
  for (const auto& e : energy_storage_catalog) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

const SiteSpec* Scenario::find_site(const std::string& node) const {
  for (const auto& s : sites) {
    if (s.node == node) return &s;
  }
  return nullptr;
}

// ---- enum <-> string ------------------------------------------------------

namespace {

template <typename E>
struct EnumName {
  E value;
  const char* name;
};

constexpr EnumName<BodyClass> kBodyNames[] = {
    {BodyClass::kSurface, "surface"},
    {BodyClass::kOrbit, "orbit"},
    {BodyClass::kLagrangePoint, "lagrange-point"},
};
constexpr EnumName<CommodityKind> kKindNames[] = {
    {CommodityKind::kContinuous, "continuous"},
    {CommodityKind::kDiscrete, "discrete"},
};
constexpr EnumName<CommodityCategory> kCategoryNames[] = {
    {CommodityCategory::kPayload, "payload"},
    {CommodityCategory::kPropellantComponent, "propellant-component"},
    {CommodityCategory::kResource, "resource"},
    {CommodityCategory::kVehicle, "vehicle"},
    {CommodityCategory::kInfrastructureSubsystem, "infrastructure-subsystem"},
    {CommodityCategory::kPower, "power"},
    {CommodityCategory::kEnergyStorage, "energy-storage"},
    {CommodityCategory::kSpare, "spare"},
};
constexpr EnumName<IsruRole> kRoleNames[] = {
    {IsruRole::kReactor, "reactor"},
    {IsruRole::kExcavator, "excavator"},
    {IsruRole::kStorage, "storage"},
};
constexpr EnumName<PowerKind> kPowerKindNames[] = {
    {PowerKind::kPV, "PV"},
    {PowerKind::kFSPS, "FSPS"},
    {PowerKind::kRPS, "RPS"},
};
constexpr EnumName<DegradationPeriod> kPeriodNames[] = {
    {DegradationPeriod::kYear, "year"},
    {DegradationPeriod::kSol, "sol"},
};

template <typename E, std::size_t N>
std::string enum_to(const EnumName<E> (&table)[N], E v) {
  for (const auto& e : table) {
    if (e.value == v) return e.name;
  }
  return "?";
}

template <typename E, std::size_t N>
E enum_from(const EnumName<E> (&table)[N], const std::string& s, const char* what) {
  for (const auto& e : table) {
    if (s == e.name) return e.value;
  }
  throw Error(Errc::kParseError, std::string("unknown ") + what + " '" + s + "'");
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  auto it = j.find(key);
  return it == j.end() || it->is_null() ? fallback : it->get<T>();
}

json windows_to_json(const std::vector<Window>& ws) {
  json arr = json::array();
  for (const Window& w : ws) arr.push_back(json::array({w.open_day, w.close_day}));
  return arr;
}

std::vector<Window> windows_from_json(const json& j) {
  std::vector<Window> ws;
  for (const json& w : j) {
    if (!w.is_array() || w.size() != 2) throw Error(Errc::kParseError, "window must be [open, close]");
    ws.push_back({w[0].get<double>(), w[1].get<double>()});
  }
  return ws;
}

json to_json_doc(const Scenario& s) {
  json j;
  j["name"] = s.name;
  j["time"] = {{"horizon_days", s.horizon_days}, {"step_days", s.step_days}};

  json nodes = json::array();
  for (const auto& n : s.nodes) {
    nodes.push_back({{"id", n.id}, {"body_class", enum_to(kBodyNames, n.body_class)}});
  }
  j["nodes"] = nodes;

  json commodities = json::array();
  for (const auto& c : s.commodities) {
    commodities.push_back({{"id", c.id},
                           {"kind", enum_to(kKindNames, c.kind)},
                           {"unit", c.unit},
                           {"category", enum_to(kCategoryNames, c.category)}});
  }
  j["commodities"] = commodities;

  json vehicles = json::array();
  for (const auto& v : s.vehicles) {
    json comps = json::array();
    for (const auto& pc : v.propellant_components) {
      comps.push_back({{"commodity", pc.commodity}, {"fraction", pc.fraction}});
    }
    vehicles.push_back({{"id", v.id},
                        {"structure_mass_kg", v.structure_mass},
                        {"propellant_capacity_kg", v.propellant_capacity},
                        {"payload_capacity_kg", v.payload_capacity},
                        {"isp_s", v.isp},
                        {"propellant_components", comps}});
  }
  j["vehicles"] = vehicles;

  json edges = json::array();
  for (const auto& e : s.edges) {
    edges.push_back({{"from", e.from},
                     {"to", e.to},
                     {"delta_v_kms", e.delta_v_kms},
                     {"tof_days", e.tof_days},
                     {"windows", windows_to_json(e.windows)},
                     {"vehicles", e.vehicles}});
  }
  j["edges"] = edges;

  json isru = json::array();
  for (const auto& e : s.isru_catalog) {
    isru.push_back({{"id", e.id},
                    {"role", enum_to(kRoleNames, e.role)},
                    {"reference_product", e.reference_product},
                    {"specific_mass", e.specific_mass},
                    {"specific_power_kw", e.specific_power},
                    {"production", e.production},
                    {"consumption", e.consumption},
                    {"operating_hours_per_solar_day", e.operating_hours_per_solar_day},
                    {"electrolysis", e.electrolysis}});
  }
  j["isru_catalog"] = isru;

  json power = json::array();
  for (const auto& p : s.power_catalog) {
    power.push_back({{"id", p.id},
                     {"kind", enum_to(kPowerKindNames, p.kind)},
                     {"specific_mass_kg_per_kw", p.specific_mass_kg_per_kw},
                     {"working_hours_per_solar_day", p.working_hours_per_solar_day},
                     {"degradation_rate", p.degradation_rate},
                     {"degradation_period", enum_to(kPeriodNames, p.degradation_period)}});
  }
  j["power_catalog"] = power;

  json es = json::array();
  for (const auto& e : s.energy_storage_catalog) {
    es.push_back({{"id", e.id},
                  {"specific_energy_kwh_per_kg", e.specific_energy_kwh_per_kg},
                  {"efficiency", e.efficiency}});
  }
  j["energy_storage_catalog"] = es;

  json sites = json::array();
  for (const auto& site : s.sites) {
    sites.push_back({{"node", site.node},
                     {"infrastructure", site.infrastructure},
                     {"power", site.power},
                     {"energy_storage", site.energy_storage},
                     {"internal_resources", site.internal_resources}});
  }
  j["sites"] = sites;

  json demands = json::array();
  for (const auto& d : s.demands) {
    demands.push_back(
        {{"node", d.node}, {"day", d.day}, {"commodity", d.commodity}, {"amount", d.amount}});
  }
  j["demands"] = demands;

  json supplies = json::array();
  for (const auto& u : s.unbounded_supplies) {
    supplies.push_back({{"node", u.node}, {"commodities", u.commodities}, {"cap", u.cap}});
  }
  j["unbounded_supplies"] = supplies;

  const Operations& op = s.operations;
  j["operations"] = {{"launch_interval_days", op.launch_interval_days},
                     {"maintenance_rate_per_year", op.maintenance_rate_per_year},
                     {"solar_day_hours", op.solar_day_hours},
                     {"isru_productivity", op.isru_productivity},
                     {"spare_commodity", op.spare_commodity}};
  j["objective"] = {{"type", "IMLEO"}, {"from", s.objective.from}, {"to", s.objective.to}};

  const FidelitySpec& f = s.fidelity;
  json fj;
  fj["packing_n"] = f.packing_n ? json(*f.packing_n) : json("ALL");
  fj["include_idle_holdovers"] = f.include_idle_holdovers;
  fj["packable_categories"] = f.packable_categories;
  fj["coefficient_rel_tol"] = f.coefficient_rel_tol;
  if (f.prefixed) {
    const PrefixedSpec& p = *f.prefixed;
    fj["prefixed"] = {{"bundle_id", p.bundle_id},
                      {"site", p.site},
                      {"reference_product", p.reference_product},
                      {"reference_rate_kg_per_hr", p.reference_rate_kg_per_hr},
                      {"storage_scale", p.storage_scale}};
  } else {
    fj["prefixed"] = nullptr;
  }
  j["fidelity"] = fj;
  return j;
}

Scenario from_json_doc(const json& j) {
  Scenario s;
  s.name = get_or<std::string>(j, "name", "scenario");
  const json& time = j.at("time");
  s.horizon_days = time.at("horizon_days").get<double>();
  s.step_days = time.at("step_days").get<double>();

  for (const json& n : j.value("nodes", json::array())) {
    s.nodes.push_back({n.at("id").get<std::string>(),
                       enum_from(kBodyNames, get_or<std::string>(n, "body_class", "orbit"),
                                 "body_class")});
  }
  for (const json& c : j.value("commodities", json::array())) {
    Commodity com;
    com.id = c.at("id").get<std::string>();
    com.kind = enum_from(kKindNames, c.at("kind").get<std::string>(), "commodity kind");
    com.unit = get_or<std::string>(c, "unit", com.kind == CommodityKind::kDiscrete ? "count" : "kg");
    com.category = enum_from(kCategoryNames, c.at("category").get<std::string>(), "category");
    s.commodities.push_back(com);
  }
  for (const json& v : j.value("vehicles", json::array())) {
    VehicleSpec vs;
    vs.id = v.at("id").get<std::string>();
    vs.structure_mass = v.at("structure_mass_kg").get<double>();
    vs.propellant_capacity = v.at("propellant_capacity_kg").get<double>();
    vs.payload_capacity = v.at("payload_capacity_kg").get<double>();
    vs.isp = v.at("isp_s").get<double>();
    for (const json& pc : v.value("propellant_components", json::array())) {
      vs.propellant_components.push_back(
          {pc.at("commodity").get<std::string>(), pc.at("fraction").get<double>()});
    }
    s.vehicles.push_back(vs);
  }
  for (const json& e : j.value("edges", json::array())) {
    TransportEdge te;
    te.from = e.at("from").get<std::string>();
    te.to = e.at("to").get<std::string>();
    te.delta_v_kms = e.at("delta_v_kms").get<double>();
    te.tof_days = e.at("tof_days").get<double>();
    te.windows = windows_from_json(e.value("windows", json::array()));
    te.vehicles = get_or<std::vector<std::string>>(e, "vehicles", {});
    s.edges.push_back(te);
  }
  for (const json& e : j.value("isru_catalog", json::array())) {
    IsruCatalogEntry ie;
    ie.id = e.at("id").get<std::string>();
    ie.role = enum_from(kRoleNames, e.at("role").get<std::string>(), "role");
    ie.reference_product = e.at("reference_product").get<std::string>();
    ie.specific_mass = e.at("specific_mass").get<double>();
    ie.specific_power = get_or<double>(e, "specific_power_kw", 0.0);
    ie.production = get_or<std::map<std::string, double>>(e, "production", {});
    ie.consumption = get_or<std::map<std::string, double>>(e, "consumption", {});
    ie.operating_hours_per_solar_day = get_or<double>(e, "operating_hours_per_solar_day", 708.0);
    ie.electrolysis = get_or<bool>(e, "electrolysis", false);
    s.isru_catalog.push_back(ie);
  }
  for (const json& p : j.value("power_catalog", json::array())) {
    PowerCatalogEntry pe;
    pe.id = p.at("id").get<std::string>();
    pe.kind = enum_from(kPowerKindNames, p.at("kind").get<std::string>(), "power kind");
    pe.specific_mass_kg_per_kw = p.at("specific_mass_kg_per_kw").get<double>();
    pe.working_hours_per_solar_day = p.at("working_hours_per_solar_day").get<double>();
    pe.degradation_rate = get_or<double>(p, "degradation_rate", 0.0);
    pe.degradation_period =
        enum_from(kPeriodNames, get_or<std::string>(p, "degradation_period", "year"),
                  "degradation period");
    s.power_catalog.push_back(pe);
  }
  for (const json& e : j.value("energy_storage_catalog", json::array())) {
    s.energy_storage_catalog.push_back({e.at("id").get<std::string>(),
                                        e.at("specific_energy_kwh_per_kg").get<double>(),
                                        e.at("efficiency").get<double>()});
  }
  for (const json& site : j.value("sites", json::array())) {
    SiteSpec sp;
    sp.node = site.at("node").get<std::string>();
    sp.infrastructure = get_or<std::vector<std::string>>(site, "infrastructure", {});
    sp.power = get_or<std::string>(site, "power", "");
    sp.energy_storage = get_or<std::string>(site, "energy_storage", "");
    sp.internal_resources = get_or<std::vector<std::string>>(site, "internal_resources", {});
    s.sites.push_back(sp);
  }
  for (const json& d : j.value("demands", json::array())) {
    s.demands.push_back({d.at("node").get<std::string>(), d.at("day").get<double>(),
                         d.at("commodity").get<std::string>(), d.at("amount").get<double>()});
  }
  for (const json& u : j.value("unbounded_supplies", json::array())) {
    s.unbounded_supplies.push_back({u.at("node").get<std::string>(),
                                    u.at("commodities").get<std::vector<std::string>>(),
                                    get_or<double>(u, "cap", 1e9)});
  }
  if (auto it = j.find("operations"); it != j.end()) {
    Operations& op = s.operations;
    op.launch_interval_days = get_or<double>(*it, "launch_interval_days", op.launch_interval_days);
    op.maintenance_rate_per_year =
        get_or<double>(*it, "maintenance_rate_per_year", op.maintenance_rate_per_year);
    op.solar_day_hours = get_or<double>(*it, "solar_day_hours", op.solar_day_hours);
    op.isru_productivity = get_or<double>(*it, "isru_productivity", op.isru_productivity);
    op.spare_commodity = get_or<std::string>(*it, "spare_commodity", op.spare_commodity);
  }
  if (auto it = j.find("objective"); it != j.end()) {
    const std::string type = get_or<std::string>(*it, "type", "IMLEO");
    if (type != "IMLEO") throw Error(Errc::kParseError, "unsupported objective '" + type + "'");
    s.objective.from = get_or<std::string>(*it, "from", s.objective.from);
    s.objective.to = get_or<std::string>(*it, "to", s.objective.to);
  }
  if (auto it = j.find("fidelity"); it != j.end()) {
    FidelitySpec& f = s.fidelity;
    if (auto n = it->find("packing_n"); n != it->end() && !n->is_null()) {
      if (n->is_string()) {
        if (n->get<std::string>() != "ALL") throw Error(Errc::kParseError, "packing_n must be ALL or an integer");
      } else {
        f.packing_n = n->get<int>();
      }
    }
    f.include_idle_holdovers = get_or<bool>(*it, "include_idle_holdovers", false);
    f.packable_categories = get_or<std::string>(*it, "packable_categories", f.packable_categories);
    f.coefficient_rel_tol = get_or<double>(*it, "coefficient_rel_tol", 0.0);
    if (auto p = it->find("prefixed"); p != it->end() && !p->is_null()) {
      PrefixedSpec ps;
      ps.bundle_id = get_or<std::string>(*p, "bundle_id", ps.bundle_id);
      ps.site = p->at("site").get<std::string>();
      ps.reference_product = get_or<std::string>(*p, "reference_product", "");
      ps.reference_rate_kg_per_hr = get_or<double>(*p, "reference_rate_kg_per_hr", 0.0);
      ps.storage_scale = get_or<double>(*p, "storage_scale", 1.0);
      f.prefixed = ps;
    }
  }
  return s;
}

}  // namespace

std::string scenario_to_json(const Scenario& s) { return to_json_doc(s).dump(2) + "\n"; }

Scenario scenario_from_json(const std::string& text) {
  try {
    return from_json_doc(json::parse(text));
  } catch (const json::exception& e) {
    throw Error(Errc::kParseError, e.what());
  }
}

Scenario load_scenario(const std::filesystem::path& path) {
  Scenario s = scenario_from_json(read_file(path));
  require_valid(s);
  return s;
}

void save_scenario(const Scenario& s, const std::filesystem::path& path) {
  write_file_atomic(path, scenario_to_json(s));
}

// ---- validation -----------------------------------------------------------

ValidationResult validate_scenario(const Scenario& s) {
  ValidationResult r;
  auto err = [&r](const std::string& m) { r.errors.push_back(m); };

  std::optional<TimeGrid> grid;
  try {
    grid = s.grid();
  } catch (const Error& e) {
    err(std::string("time grid: ") + e.what());
  }

  std::set<std::string> node_ids;
  for (const auto& n : s.nodes) {
    if (!node_ids.insert(n.id).second) err("duplicate node id '" + n.id + "'");
  }
  std::map<std::string, const Commodity*> com;
  for (const auto& c : s.commodities) {
    if (!com.emplace(c.id, &c).second) err("duplicate commodity id '" + c.id + "'");
    if (c.category == CommodityCategory::kVehicle && c.kind != CommodityKind::kDiscrete) {
      err("vehicle commodity '" + c.id + "' must be discrete");
    }
    if (c.unit == "kg" && c.kind != CommodityKind::kContinuous) {
      err("mass-valued commodity '" + c.id + "' must be continuous");
    }
    if (c.unit != "kg" && c.unit != "count") err("commodity '" + c.id + "' has unknown unit '" + c.unit + "'");
  }
  auto need_node = [&](const std::string& id, const std::string& where) {
    if (!node_ids.count(id)) err(where + ": unknown node '" + id + "'");
  };
  auto need_com = [&](const std::string& id, const std::string& where) {
    if (!com.count(id)) err(where + ": unknown commodity '" + id + "'");
  };

  std::set<std::string> vehicle_ids;
  for (const auto& v : s.vehicles) {
    const std::string where = "vehicle '" + v.id + "'";
    if (!vehicle_ids.insert(v.id).second) err("duplicate vehicle id '" + v.id + "'");
    auto it = com.find(v.id);
    if (it == com.end()) {
      err(where + ": no commodity with the vehicle's id");
    } else if (it->second->category != CommodityCategory::kVehicle) {
      err(where + ": commodity category must be vehicle");
    }
    if (!(v.isp > 0.0)) err(where + ": isp must be positive");
    if (v.structure_mass < 0 || v.propellant_capacity < 0 || v.payload_capacity < 0) {
      err(where + ": negative capacity");
    }
    double total = 0.0;
    for (const auto& pc : v.propellant_components) {
      need_com(pc.commodity, where);
      if (pc.fraction < 0) err(where + ": negative propellant fraction");
      total += pc.fraction;
    }
    if (std::fabs(total - 1.0) > 1e-9) err(where + ": propellant fractions sum to " + std::to_string(total));
  }

  for (std::size_t i = 0; i < s.edges.size(); ++i) {
    const auto& e = s.edges[i];
    const std::string where = "edge " + e.from + "->" + e.to;
    need_node(e.from, where);
    need_node(e.to, where);
    if (e.delta_v_kms < 0) err(where + ": negative delta_v");
    if (e.tof_days < 0) err(where + ": negative tof");
    for (const auto& vid : e.vehicles) {
      if (!vehicle_ids.count(vid)) err(where + ": unknown vehicle '" + vid + "'");
    }
    for (std::size_t w = 0; w < e.windows.size(); ++w) {
      if (e.windows[w].close_day < e.windows[w].open_day) err(where + ": window closes before it opens");
      if (w > 0 && e.windows[w].open_day <= e.windows[w - 1].close_day) {
        err(where + ": windows overlap or are unsorted");
      }
    }
  }

  std::set<std::string> catalog_ids;
  for (const auto& e : s.isru_catalog) {
    const std::string where = "isru entry '" + e.id + "'";
    if (!catalog_ids.insert(e.id).second) err("duplicate catalog id '" + e.id + "'");
    if (!(e.specific_mass > 0)) err(where + ": specific mass must be positive");
    if (e.specific_power < 0) err(where + ": negative specific power");
    for (const auto& [k, a] : e.production) {
      if (a < 0) err(where + ": negative production coefficient for '" + k + "'");
    }
    for (const auto& [k, b] : e.consumption) {
      if (b < 0) err(where + ": negative consumption coefficient for '" + k + "'");
    }
    if (e.electrolysis && !stoichiometry_holds(e)) err(where + ": outputs exceed inputs");
    if (e.operating_hours_per_solar_day < 0 || e.operating_hours_per_solar_day > s.operations.solar_day_hours) {
      err(where + ": operating hours outside the solar day");
    }
  }
  for (const auto& p : s.power_catalog) {
    const std::string where = "power entry '" + p.id + "'";
    if (!catalog_ids.insert(p.id).second) err("duplicate catalog id '" + p.id + "'");
    if (!(p.specific_mass_kg_per_kw > 0)) err(where + ": specific mass must be positive");
    if (p.working_hours_per_solar_day < 0 || p.working_hours_per_solar_day > s.operations.solar_day_hours) {
      err(where + ": working hours outside the solar day");
    }
    if (p.degradation_rate < 0 || p.degradation_rate >= 1) err(where + ": degradation rate outside [0,1)");
  }
  for (const auto& e : s.energy_storage_catalog) {
    const std::string where = "energy storage '" + e.id + "'";
    if (!catalog_ids.insert(e.id).second) err("duplicate catalog id '" + e.id + "'");
    if (!(e.specific_energy_kwh_per_kg > 0)) err(where + ": specific energy must be positive");
    if (!(e.efficiency > 0 && e.efficiency <= 1)) err(where + ": efficiency outside (0,1]");
  }

  std::set<std::string> site_nodes;
  for (const auto& site : s.sites) {
    const std::string where = "site '" + site.node + "'";
    need_node(site.node, where);
    if (!site_nodes.insert(site.node).second) err("duplicate site '" + site.node + "'");
    const auto is_internal = [&](const std::string& id) {
      return std::find(site.internal_resources.begin(), site.internal_resources.end(), id) !=
             site.internal_resources.end();
    };
    for (const auto& res : site.internal_resources) {
      if (com.count(res)) err(where + ": internal resource '" + res + "' is also a commodity");
    }
    double max_qi = 0.0;
    for (const auto& id : site.infrastructure) {
      const IsruCatalogEntry* e = s.find_isru(id);
      if (!e) {
        err(where + ": unknown catalog entry '" + id + "'");
        continue;
      }
      max_qi = std::max(max_qi, e->operating_hours_per_solar_day);
      need_com(id, where);
      for (const auto& [k, a] : e->production) {
        if (!is_internal(k)) need_com(k, where + " entry '" + id + "'");
      }
      for (const auto& [k, b] : e->consumption) {
        if (!is_internal(k)) need_com(k, where + " entry '" + id + "'");
      }
      if (e->role == IsruRole::kStorage) need_com(e->reference_product, where + " entry '" + id + "'");
    }
    const PowerCatalogEntry* power = nullptr;
    if (!site.power.empty()) {
      power = s.find_power(site.power);
      if (!power) err(where + ": unknown power entry '" + site.power + "'");
      need_com(site.power, where);
      if (power && !(power->working_hours_per_solar_day > 0)) {
        err(where + ": power system '" + site.power + "' has zero working time");
      }
    } else if (!site.infrastructure.empty()) {
      r.warnings.push_back(where + ": no power system, infrastructure power demand is ignored");
    }
    if (!site.energy_storage.empty()) {
      if (!s.find_energy_storage(site.energy_storage)) {
        err(where + ": unknown energy storage '" + site.energy_storage + "'");
      }
      need_com(site.energy_storage, where);
      if (site.power.empty()) err(where + ": energy storage requires a power system");
    }
    if (power && site.energy_storage.empty() && max_qi > power->working_hours_per_solar_day) {
      err(where + ": infrastructure outlasts the power system and no energy storage is declared");
    }
    if (s.operations.maintenance_rate_per_year > 0 && !site.infrastructure.empty()) {
      need_com(s.operations.spare_commodity, where + " maintenance");
    }
  }

  for (const auto& d : s.demands) {
    const std::string where = "demand at " + d.node + " day " + std::to_string(d.day);
    need_node(d.node, where);
    need_com(d.commodity, where);
    if (grid && !grid->index_of(d.day)) err(where + ": off-grid time");
  }
  for (const auto& u : s.unbounded_supplies) {
    need_node(u.node, "unbounded supply");
    for (const auto& c : u.commodities) need_com(c, "unbounded supply at " + u.node);
    if (!(u.cap > 0)) err("unbounded supply at " + u.node + ": cap must be positive");
    r.warnings.push_back("unbounded supply at " + u.node + " capped at " + std::to_string(u.cap) +
                         " per commodity per step");
  }

  need_node(s.objective.from, "objective");
  need_node(s.objective.to, "objective");
  if (!(s.operations.solar_day_hours > 0)) err("operations: solar day must be positive");
  if (s.operations.maintenance_rate_per_year < 0) err("operations: negative maintenance rate");
  if (!(s.operations.launch_interval_days > 0)) err("operations: launch interval must be positive");

  const FidelitySpec& f = s.fidelity;
  if (f.packing_n && *f.packing_n < 0) err("fidelity: packing_n must be non-negative");
  if (f.packable_categories != "infrastructure" && f.packable_categories != "all") {
    err("fidelity: packable_categories must be 'infrastructure' or 'all'");
  }
  if (f.coefficient_rel_tol < 0) err("fidelity: negative coefficient tolerance");
  if (f.prefixed) {
    const PrefixedSpec& p = *f.prefixed;
    if (!s.find_site(p.site)) err("prefixed: '" + p.site + "' is not a site");
    if (com.count(p.bundle_id)) err("prefixed: bundle id '" + p.bundle_id + "' collides with a commodity");
    if (p.storage_scale < 0) err("prefixed: negative storage scale");
  }
  return r;
}

void require_valid(const Scenario& s) {
  ValidationResult r = validate_scenario(s);
  if (!r.ok()) {
    std::ostringstream msg;
    msg << r.errors.size() << " problem(s); first: " << r.errors.front();
    throw Error(Errc::kValidationError, msg.str(), r.errors);
  }
}

}  // namespace spacelog
