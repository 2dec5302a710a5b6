#pragma once
// Static logistics network and its time expansion.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace spacelog {

enum class BodyClass { kSurface, kOrbit, kLagrangePoint };

struct NodeSpec {
  std::string id;
  BodyClass body_class = BodyClass::kOrbit;

  bool operator==(const NodeSpec&) const = default;
};

/// Closed interval of launch days during which departures are permitted.
struct Window {
  double open_day = 0.0;
  double close_day = 0.0;

  bool contains(double day) const { return day >= open_day - 1e-9 && day <= close_day + 1e-9; }
  bool operator==(const Window&) const = default;
};

struct TransportEdge {
  std::string from;
  std::string to;
  double delta_v_kms = 0.0;
  double tof_days = 0.0;
  std::vector<Window> windows;  // sorted, non-overlapping; empty means never open
  std::vector<std::string> vehicles;  // vehicle ids allowed on this edge; empty = all

  bool open_at(double day) const;
  bool allows(const std::string& vehicle_id) const;
  bool operator==(const TransportEdge&) const = default;
};

struct PropellantComponent {
  std::string commodity;
  double fraction = 1.0;  // share of total propellant mass

  bool operator==(const PropellantComponent&) const = default;
};

struct VehicleSpec {
  std::string id;  // also the id of the vehicle's count commodity
  double structure_mass = 0.0;       // S_v, kg
  double propellant_capacity = 0.0;  // P_v, kg
  double payload_capacity = 0.0;     // C_v, kg
  double isp = 0.0;                  // s
  std::vector<PropellantComponent> propellant_components;

  bool operator==(const VehicleSpec&) const = default;
};

struct TimeGrid {
  double horizon_days = 0.0;
  double step_days = 1.0;
  std::vector<double> steps;  // 0, step, ..., horizon

  std::size_t size() const { return steps.size(); }
  /// Index of the grid point at `day`, or nullopt when off-grid.
  std::optional<int> index_of(double day) const;
};

/// Throws Error(kNonDivisibleHorizon) unless step > 0 and horizon is a whole
/// number of steps.
TimeGrid build_time_grid(double horizon_days, double step_days);

/// Whole grid steps spanned by a flight; sub-step times round to nearest, ties up.
int steps_for_duration(double tof_days, double step_days);

enum class ArcKind { kTransport, kHoldover };

struct Arc {
  ArcKind kind = ArcKind::kTransport;
  int vehicle = -1;  // index into vehicles; -1 for holdover
  int edge = -1;     // index into edges; -1 for holdover
  int from = 0;      // node index
  int to = 0;
  int depart = 0;  // step index
  int arrive = 0;
  bool window_open = true;

  bool is_holdover() const { return kind == ArcKind::kHoldover; }
};

/// Immutable after construction.
class TimeExpandedGraph {
 public:
  TimeExpandedGraph() = default;

  const std::vector<NodeSpec>& nodes() const { return nodes_; }
  const TimeGrid& grid() const { return grid_; }
  const std::vector<Arc>& arcs() const { return arcs_; }
  int node_index(const std::string& id) const;  // -1 when absent
  std::size_t transport_arc_count() const;
  std::size_t holdover_arc_count() const;

 private:
  friend TimeExpandedGraph expand(std::span<const NodeSpec>, std::span<const TransportEdge>,
                                  std::span<const VehicleSpec>, const TimeGrid&);
  std::vector<NodeSpec> nodes_;
  TimeGrid grid_;
  std::vector<Arc> arcs_;
};

/// One transport arc per (vehicle, edge, departure step) that arrives on the
/// grid, one holdover arc per (node, consecutive step pair). Canonical order:
/// transport arcs by (vehicle, from, to, depart), then holdovers by (node, depart).
TimeExpandedGraph expand(std::span<const NodeSpec> nodes, std::span<const TransportEdge> edges,
                         std::span<const VehicleSpec> vehicles, const TimeGrid& grid);

/// Steps between departure and arrival: 1 for holdovers.
int arc_duration(const Arc& arc);

}  // namespace spacelog
