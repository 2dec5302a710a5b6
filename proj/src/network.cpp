#include "spacelog/network.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

#include "spacelog/error.hpp"

namespace spacelog {

bool TransportEdge::open_at(double day) const {
  return std::any_of(windows.begin(), windows.end(),
                     [day](const Window& w) { return w.contains(day); });
}

bool TransportEdge::allows(const std::string& vehicle_id) const {
  return vehicles.empty() || std::find(vehicles.begin(), vehicles.end(), vehicle_id) != vehicles.end();
}

std::optional<int> TimeGrid::index_of(double day) const {
  const double pos = day / step_days;
  const double rounded = std::round(pos);
  if (std::fabs(pos - rounded) > 1e-9 || rounded < 0 ||
      rounded >= static_cast<double>(steps.size())) {
    return std::nullopt;
  }
  return static_cast<int>(rounded);
}

TimeGrid build_time_grid(double horizon_days, double step_days) {
  if (!(step_days > 0.0) || !(horizon_days >= 0.0)) {
    throw Error(Errc::kNonDivisibleHorizon, "step must be positive and horizon non-negative");
  }
  const double count = horizon_days / step_days;
  const double whole = std::round(count);
  if (std::fabs(count - whole) > 1e-9 * std::max(1.0, count)) {
    throw Error(Errc::kNonDivisibleHorizon, "horizon " + std::to_string(horizon_days) +
                                                " is not a multiple of step " +
                                                std::to_string(step_days));
  }
  TimeGrid grid;
  grid.horizon_days = horizon_days;
  grid.step_days = step_days;
  const int n = static_cast<int>(whole);
  grid.steps.reserve(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) grid.steps.push_back(step_days * i);
  return grid;
}

int steps_for_duration(double tof_days, double step_days) {
  return static_cast<int>(std::floor(tof_days / step_days + 0.5));
}

int TimeExpandedGraph::node_index(const std::string& id) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].id == id) return static_cast<int>(i);
  }
  return -1;
}

std::size_t TimeExpandedGraph::transport_arc_count() const {
  return static_cast<std::size_t>(
      std::count_if(arcs_.begin(), arcs_.end(), [](const Arc& a) { return !a.is_holdover(); }));
}

std::size_t TimeExpandedGraph::holdover_arc_count() const {
  return arcs_.size() - transport_arc_count();
}

TimeExpandedGraph expand(std::span<const NodeSpec> nodes, std::span<const TransportEdge> edges,
                         std::span<const VehicleSpec> vehicles, const TimeGrid& grid) {
  TimeExpandedGraph g;
  g.nodes_.assign(nodes.begin(), nodes.end());
  g.grid_ = grid;

  std::set<std::string> seen;
  for (const NodeSpec& n : nodes) {
    if (!seen.insert(n.id).second) throw Error(Errc::kDuplicateId, "node '" + n.id + "'");
  }

  const int last = static_cast<int>(grid.size()) - 1;
  for (const TransportEdge& edge : edges) {
    for (const std::string& vid : edge.vehicles) {
      const bool known = std::any_of(vehicles.begin(), vehicles.end(),
                                     [&](const VehicleSpec& v) { return v.id == vid; });
      if (!known) {
        throw Error(Errc::kDanglingNodeReference,
                    "edge " + edge.from + "->" + edge.to + " names unknown vehicle '" + vid + "'");
      }
    }
  }
  for (std::size_t v = 0; v < vehicles.size(); ++v) {
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const TransportEdge& edge = edges[e];
      const int from = g.node_index(edge.from);
      const int to = g.node_index(edge.to);
      if (from < 0 || to < 0) {
        throw Error(Errc::kDanglingNodeReference,
                    "edge " + edge.from + "->" + edge.to + " references an undeclared node");
      }
      if (!edge.allows(vehicles[v].id)) continue;
      const int duration = steps_for_duration(edge.tof_days, grid.step_days);
      for (int t = 0; t + duration <= last; ++t) {
        Arc arc;
        arc.kind = ArcKind::kTransport;
        arc.vehicle = static_cast<int>(v);
        arc.edge = static_cast<int>(e);
        arc.from = from;
        arc.to = to;
        arc.depart = t;
        arc.arrive = t + duration;
        arc.window_open = edge.open_at(grid.steps[static_cast<std::size_t>(t)]);
        g.arcs_.push_back(arc);
      }
    }
  }
  std::stable_sort(g.arcs_.begin(), g.arcs_.end(), [](const Arc& a, const Arc& b) {
    return std::tie(a.vehicle, a.from, a.to, a.depart, a.edge) <
           std::tie(b.vehicle, b.from, b.to, b.depart, b.edge);
  });
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    for (int t = 0; t < last; ++t) {
      Arc arc;
      arc.kind = ArcKind::kHoldover;
      arc.from = arc.to = static_cast<int>(n);
      arc.depart = t;
      arc.arrive = t + 1;
      g.arcs_.push_back(arc);
    }
  }
  return g;
}

int arc_duration(const Arc& arc) { return arc.arrive - arc.depart; }

}  // namespace spacelog
