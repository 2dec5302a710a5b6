#pragma once
// Scenario document: everything needed to build the three fidelities.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "spacelog/commodity.hpp"
#include "spacelog/network.hpp"

namespace spacelog {

struct DemandEntry {
  std::string node;
  double day = 0.0;
  std::string commodity;
  double amount = 0.0;  // supplies positive, demands negative

  bool operator==(const DemandEntry&) const = default;
};

/// Table-1 style "+infinity, all the time" supply, capped so the model stays finite.
struct UnboundedSupply {
  std::string node;
  std::vector<std::string> commodities;
  double cap = 1e9;

  bool operator==(const UnboundedSupply&) const = default;
};

/// A node where infrastructure may operate: holdover arcs here carry the
/// production, maintenance, power and storage physics.
struct SiteSpec {
  std::string node;
  std::vector<std::string> infrastructure;  // reactor/excavator/storage catalog ids
  std::string power;                        // power catalog id
  std::string energy_storage;               // optional energy-storage catalog id
  std::vector<std::string> internal_resources;

  bool operator==(const SiteSpec&) const = default;
};

struct Operations {
  double launch_interval_days = 120.0;
  double maintenance_rate_per_year = 0.10;
  double solar_day_hours = 708.0;
  double isru_productivity = 1.0;  // informational; the catalog is already scaled
  std::string spare_commodity = "spares";

  bool operator==(const Operations&) const = default;
};

struct ObjectiveSpec {
  std::string from = "Earth";
  std::string to = "LEO";

  bool operator==(const ObjectiveSpec&) const = default;
};

struct PrefixedSpec {
  std::string bundle_id = "isru_bundle";
  std::string site;
  std::string reference_product;
  double reference_rate_kg_per_hr = 1.0;
  double storage_scale = 1.0;

  bool operator==(const PrefixedSpec&) const = default;
};

struct FidelitySpec {
  std::optional<int> packing_n;  // nullopt = pack every candidate set
  bool include_idle_holdovers = false;
  /// "infrastructure": subsystem, power, energy-storage and spares commodities
  /// may share a package, everything else ships alone. "all": any commodities
  /// that meet the packing conditions.
  std::string packable_categories = "infrastructure";
  double coefficient_rel_tol = 0.0;  // 0 = exact equality
  std::optional<PrefixedSpec> prefixed;

  bool operator==(const FidelitySpec&) const = default;
};

struct Scenario {
  std::string name = "scenario";
  double horizon_days = 0.0;
  double step_days = 1.0;
  std::vector<NodeSpec> nodes;
  std::vector<Commodity> commodities;
  std::vector<VehicleSpec> vehicles;
  std::vector<TransportEdge> edges;
  std::vector<IsruCatalogEntry> isru_catalog;
  std::vector<PowerCatalogEntry> power_catalog;
  std::vector<EnergyStorageEntry> energy_storage_catalog;
  std::vector<SiteSpec> sites;
  std::vector<DemandEntry> demands;
  std::vector<UnboundedSupply> unbounded_supplies;
  Operations operations;
  ObjectiveSpec objective;
  FidelitySpec fidelity;

  bool operator==(const Scenario&) const = default;

  CommoditySpace space() const { return CommoditySpace(commodities); }
  TimeGrid grid() const { return build_time_grid(horizon_days, step_days); }
  const IsruCatalogEntry* find_isru(const std::string& id) const;
  const PowerCatalogEntry* find_power(const std::string& id) const;
  const EnergyStorageEntry* find_energy_storage(const std::string& id) const;
  const SiteSpec* find_site(const std::string& node) const;
};

struct ValidationResult {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;

  bool ok() const { return errors.empty(); }
};

ValidationResult validate_scenario(const Scenario& s);
/// Throws Error(kValidationError) carrying every diagnostic.
void require_valid(const Scenario& s);

std::string scenario_to_json(const Scenario& s);
/// Throws Error(kParseError) on malformed documents; does not validate.
Scenario scenario_from_json(const std::string& text);
/// Parse + validate.
Scenario load_scenario(const std::filesystem::path& path);
void save_scenario(const Scenario& s, const std::filesystem::path& path);

struct LunarVariant {
  int missions = 3;                   // 3, 4 or 5
  double launch_interval_days = 120;  // 60, 120 or 240
  double isru_productivity = 1.0;     // 1.0, 1.25 or 1.5
  double storage_scale = 1.0;         // [0, 1], prefixed storage sizing

  bool operator==(const LunarVariant&) const = default;
};

/// Cislunar campaign: Earth, LEO, GEO, EML1, Moon; one crew mission per year.
/// Throws Error(kUnknownVariant) outside the supported variant values.
Scenario bundled_lunar_scenario(const LunarVariant& variant = {});

}  // namespace spacelog
