#include "spacelog/random_scenario.hpp"

#include <random>
#include <string>

namespace spacelog {

Scenario random_scenario(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uni = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
  auto pick = [&](int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); };
  auto coin = [&](double p) { return uni(0.0, 1.0) < p; };

  Scenario s;
  s.name = "random_" + std::to_string(seed);
  const int n_nodes = pick(2, 4);
  const int n_steps = pick(n_nodes - 1, 5);
  s.step_days = 10.0;
  s.horizon_days = 10.0 * n_steps;
  for (int i = 0; i < n_nodes; ++i) {
    const bool surface = i == 0 || i == n_nodes - 1;
    s.nodes.push_back({"N" + std::to_string(i), surface ? BodyClass::kSurface : BodyClass::kOrbit});
  }
  const std::string site = "N" + std::to_string(n_nodes - 1);

  // The sixth commodity slot holds a second vehicle, spares or an O2 tank.
  const int extra = pick(0, 2);
  const int n_vehicles = extra == 0 ? 2 : 1;
  const bool spares = extra == 1;
  const bool tank = extra == 2;
  using C = CommodityCategory;
  s.commodities = {{"payload", CommodityKind::kContinuous, "kg", C::kPayload},
                   {"O2", CommodityKind::kContinuous, "kg", C::kPropellantComponent},
                   {"plant", CommodityKind::kContinuous, "kg", C::kInfrastructureSubsystem},
                   {"power", CommodityKind::kContinuous, "kg", C::kPower}};
  if (spares) s.commodities.push_back({"spares", CommodityKind::kContinuous, "kg", C::kSpare});
  if (tank) s.commodities.push_back({"tank", CommodityKind::kContinuous, "kg", C::kInfrastructureSubsystem});
  for (int v = 0; v < n_vehicles; ++v) {
    const std::string id = "V" + std::to_string(v + 1);
    s.commodities.push_back({id, CommodityKind::kDiscrete, "count", C::kVehicle});
    s.vehicles.push_back({id, uni(500, 3000), uni(5000, 30000), uni(3000, 15000), uni(300, 460), {{"O2", 1.0}}});
  }

  for (int i = 0; i + 1 < n_nodes; ++i) {
    TransportEdge e;
    e.from = "N" + std::to_string(i);
    e.to = "N" + std::to_string(i + 1);
    e.delta_v_kms = (i == 0 && coin(0.5)) ? 0.0 : uni(0.3, 3.0);
    e.tof_days = 10.0;
    for (int t = 0; t < n_steps; ++t) {
      if (coin(0.8)) e.windows.push_back({10.0 * t, 10.0 * t});
    }
    s.edges.push_back(e);
  }
  if (n_nodes > 2 && coin(0.3)) {
    // A return leg from the site.
    TransportEdge e{site, "N" + std::to_string(n_nodes - 2), uni(0.3, 2.5), 10.0, {}, {}};
    for (int t = 0; t < n_steps; ++t) {
      if (coin(0.6)) e.windows.push_back({10.0 * t, 10.0 * t});
    }
    s.edges.push_back(e);
  }

  const double alpha = uni(0.02, 0.2);
  s.isru_catalog = {{"plant", IsruRole::kReactor, "O2", 1.0 / alpha, uni(0.05, 1.0),
                     {{"O2", alpha}}, {}, 708.0, false}};
  if (tank) s.isru_catalog.push_back({"tank", IsruRole::kStorage, "O2", uni(2.0, 40.0), uni(0.0, 0.03), {}, {}, 708.0, false});
  s.power_catalog = {{"power", PowerKind::kFSPS, uni(5.0, 50.0), 708.0, coin(0.5) ? 0.0 : uni(0.0, 0.05),
                      DegradationPeriod::kYear}};
  s.sites = {{site, {"plant"}, "power", "", {}}};
  if (tank) s.sites[0].infrastructure.push_back("tank");

  const double payload = uni(500, 6000);
  const double last_day = 10.0 * n_steps;
  s.demands.push_back({"N0", 0.0, "payload", payload});
  s.demands.push_back({site, last_day, "payload", -payload});
  if (coin(0.7)) s.demands.push_back({site, last_day, "O2", -uni(1000, 20000)});

  UnboundedSupply u;
  u.node = "N0";
  u.commodities = {"O2", "plant", "power"};
  if (spares) u.commodities.push_back("spares");
  if (tank) u.commodities.push_back("tank");
  for (const auto& v : s.vehicles) u.commodities.push_back(v.id);
  u.cap = 1e6;
  s.unbounded_supplies = {u};

  s.operations.launch_interval_days = 10.0 * pick(1, 3);
  s.operations.maintenance_rate_per_year = spares ? uni(0.05, 0.5) : 0.0;
  s.operations.solar_day_hours = 708.0;
  s.operations.spare_commodity = "spares";
  s.objective = {"N0", "N1"};
  s.fidelity.prefixed = PrefixedSpec{"bundle", site, "O2", 1.0, uni(0.0, 1.0)};
  return s;
}

}  // namespace spacelog
