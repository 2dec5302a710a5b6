// Bundled cislunar campaign. Every number here is scenario data: fleet and
// catalog values from the published tables, delta-v read off the network
// figure, payload capacities chosen by us (the tables give none).

#include <algorithm>
#include <cmath>

#include "spacelog/error.hpp"
#include "spacelog/scenario.hpp"

namespace spacelog {

namespace {

bool one_of(double v, std::initializer_list<double> allowed) {
  for (double a : allowed) {
    if (std::fabs(v - a) < 1e-12) return true;
  }
  return false;
}

Commodity massed(const std::string& id, CommodityCategory cat) {
  return {id, CommodityKind::kContinuous, "kg", cat};
}

// Departure days open in one campaign year starting at `base`: launch
// opportunities every `interval` days counting back from the outbound
// epoch, plus the return epoch at the end of the year.
std::vector<Window> mission_windows(int missions, double interval) {
  std::vector<double> days;
  for (int y = 0; y < missions; ++y) {
    const double base = 360.0 * y;
    for (double d = 240.0; d > 0.0; d -= interval) days.push_back(base + d);
    days.push_back(base + 360.0);
  }
  std::sort(days.begin(), days.end());
  days.erase(std::unique(days.begin(), days.end()), days.end());
  std::vector<Window> ws;
  for (double d : days) ws.push_back({d, d});
  return ws;
}

}  // namespace

Scenario bundled_lunar_scenario(const LunarVariant& v) {
  if (v.missions < 3 || v.missions > 5) {
    throw Error(Errc::kUnknownVariant, "missions must be 3, 4 or 5");
  }
  if (!one_of(v.launch_interval_days, {60, 120, 240})) {
    throw Error(Errc::kUnknownVariant, "launch interval must be 60, 120 or 240 days");
  }
  if (!one_of(v.isru_productivity, {1.0, 1.25, 1.5})) {
    throw Error(Errc::kUnknownVariant, "ISRU productivity must be 1.0, 1.25 or 1.5");
  }
  if (!(v.storage_scale >= 0.0 && v.storage_scale <= 1.0)) {
    throw Error(Errc::kUnknownVariant, "storage scale must lie in [0, 1]");
  }

  Scenario s;
  s.name = "lunar_campaign";
  s.horizon_days = 360.0 * v.missions;
  s.step_days = std::min(v.launch_interval_days, 120.0);

  s.nodes = {{"Earth", BodyClass::kSurface},
             {"LEO", BodyClass::kOrbit},
             {"GEO", BodyClass::kOrbit},
             {"EML1", BodyClass::kLagrangePoint},
             {"Moon", BodyClass::kSurface}};

  using C = CommodityCategory;
  s.commodities = {
      massed("payload_out", C::kPayload),
      massed("payload_return", C::kPayload),
      massed("O2", C::kPropellantComponent),
      massed("H2", C::kPropellantComponent),
      massed("CH4", C::kPropellantComponent),
      massed("H2O", C::kResource),
      massed("spares", C::kSpare),
      massed("reactor_SWE_3pct", C::kInfrastructureSubsystem),
      massed("reactor_DWE", C::kInfrastructureSubsystem),
      massed("excavator_3pct", C::kInfrastructureSubsystem),
      massed("storage_O2", C::kInfrastructureSubsystem),
      massed("storage_H2", C::kInfrastructureSubsystem),
      massed("storage_H2O", C::kInfrastructureSubsystem),
      massed("storage_CH4", C::kInfrastructureSubsystem),
      massed("power_FSPS", C::kPower),
      massed("battery", C::kEnergyStorage),
      {"SC1", CommodityKind::kDiscrete, "count", C::kVehicle},
      {"SC2", CommodityKind::kDiscrete, "count", C::kVehicle},
  };

  s.vehicles = {
      {"SC1", 5917.0, 68040.0, 40000.0, 420.0, {{"O2", 5.5 / 6.5}, {"H2", 1.0 / 6.5}}},
      {"SC2", 6560.0, 40737.0, 40000.0, 350.0, {{"O2", 3.5 / 4.5}, {"CH4", 1.0 / 4.5}}},
  };

  const auto windows = mission_windows(v.missions, v.launch_interval_days);
  const double tof = 3.0;
  auto edge = [&](const char* a, const char* b, double dv) {
    return TransportEdge{a, b, dv, tof, windows, {}};
  };
  s.edges = {
      edge("Earth", "LEO", 0.0), edge("LEO", "Earth", 0.0),  edge("LEO", "GEO", 4.33),
      edge("GEO", "LEO", 1.47),  edge("LEO", "EML1", 3.77),  edge("EML1", "LEO", 0.77),
      edge("GEO", "EML1", 1.38), edge("EML1", "GEO", 1.47),  edge("EML1", "Moon", 2.52),
      edge("Moon", "EML1", 2.52),
  };

  const double p = v.isru_productivity;
  const double a_o2 = p / 83.3;
  const double a_h2o = p / 357.0;
  s.isru_catalog = {
      {"reactor_SWE_3pct", IsruRole::kReactor, "H2O", 357.0, 13.7,
       {{"H2O", a_h2o}}, {{"regolith", a_h2o / 0.03}}, 708.0, false},
      {"reactor_DWE", IsruRole::kReactor, "O2", 83.3, 5.83,
       {{"O2", a_o2}, {"H2", a_o2 / 8.0}}, {{"H2O", a_o2 * 9.0 / 8.0}}, 708.0, true},
      {"excavator_3pct", IsruRole::kExcavator, "regolith", 0.38, 0.004,
       {{"regolith", p / 0.38}}, {}, 708.0, false},
      {"storage_O2", IsruRole::kStorage, "O2", 5.15, 0.0088, {}, {}, 708.0, false},
      {"storage_H2", IsruRole::kStorage, "H2", 3.33, 0.0267, {}, {}, 708.0, false},
      {"storage_H2O", IsruRole::kStorage, "H2O", 40.0, 0.0, {}, {}, 708.0, false},
      {"storage_CH4", IsruRole::kStorage, "CH4", 1.67, 0.0073, {}, {}, 708.0, false},
  };
  s.power_catalog = {
      {"power_FSPS", PowerKind::kFSPS, 150.0, 708.0, 0.0, DegradationPeriod::kYear},
      {"power_PV", PowerKind::kPV, 6.8, 354.0, 0.00014, DegradationPeriod::kSol},
      {"power_RPS", PowerKind::kRPS, 124.0, 708.0, 0.019, DegradationPeriod::kYear},
  };
  // The catalog lists 4 kg per kWh (battery) and 2 kg per kWh (fuel cell).
  s.energy_storage_catalog = {
      {"battery", 1.0 / 4.0, 0.95},
      {"fuel_cell", 1.0 / 2.0, 0.60},
  };
  s.sites = {{"Moon",
              {"reactor_SWE_3pct", "reactor_DWE", "excavator_3pct", "storage_O2", "storage_H2",
               "storage_H2O", "storage_CH4"},
              "power_FSPS",
              "battery",
              {"regolith"}}};

  for (int m = 0; m < v.missions; ++m) {
    const double out = 360.0 * m + 240.0;
    const double back = 360.0 * m + 360.0;
    s.demands.push_back({"Earth", out, "payload_out", 30000.0});
    s.demands.push_back({"Moon", out, "payload_out", -30000.0});
    s.demands.push_back({"Moon", back, "payload_return", 5000.0});
    s.demands.push_back({"Earth", back, "payload_return", -5000.0});
  }
  s.unbounded_supplies = {{"Earth",
                           {"O2", "H2", "CH4", "spares", "reactor_SWE_3pct", "reactor_DWE",
                            "excavator_3pct", "storage_O2", "storage_H2", "storage_H2O",
                            "storage_CH4", "power_FSPS", "battery", "SC1", "SC2"},
                           1e9}};

  s.operations.launch_interval_days = v.launch_interval_days;
  s.operations.maintenance_rate_per_year = 0.10;
  s.operations.solar_day_hours = 708.0;
  s.operations.isru_productivity = v.isru_productivity;
  s.operations.spare_commodity = "spares";
  s.objective = {"Earth", "LEO"};
  s.fidelity.prefixed = PrefixedSpec{"isru_bundle", "Moon", "O2", 1.0, v.storage_scale};
  return s;
}

}  // namespace spacelog
