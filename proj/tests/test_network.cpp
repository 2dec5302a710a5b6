#include <gtest/gtest.h>

#include <cmath>

#include "spacelog/error.hpp"
#include "spacelog/network.hpp"

namespace spacelog {
namespace {

TEST(TimeGrid, Steps) {
  EXPECT_EQ(build_time_grid(360, 120).steps, (std::vector<double>{0, 120, 240, 360}));
  EXPECT_EQ(build_time_grid(0, 1).steps, (std::vector<double>{0}));
  const TimeGrid g = build_time_grid(360, 120);
  EXPECT_EQ(g.index_of(240), 2);
  EXPECT_FALSE(g.index_of(100).has_value());
}

TEST(TimeGrid, RejectsNonDivisible) {
  try {
    build_time_grid(300, 7);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kNonDivisibleHorizon);
  }
  EXPECT_THROW(build_time_grid(10, 0), Error);
}

TEST(Duration, Rounding) {
  EXPECT_EQ(steps_for_duration(120, 120), 1);
  EXPECT_EQ(std::lround(5.0 / 120.0), 0);
  EXPECT_EQ(steps_for_duration(5, 120), 0);
  EXPECT_EQ(steps_for_duration(60, 120), 1);  // ties up
  EXPECT_EQ(steps_for_duration(250, 120), 2);
}

struct Toy {
  std::vector<NodeSpec> nodes{{"A", BodyClass::kSurface}, {"B", BodyClass::kOrbit}};
  std::vector<TransportEdge> edges{{"A", "B", 1.0, 1.0, {{0, 100}}, {}}};
  std::vector<VehicleSpec> vehicles{{"V", 1, 1, 1, 300, {}}};
};

TEST(Expand, TwoNodeCounts) {
  Toy t;
  const auto g = expand(t.nodes, t.edges, t.vehicles, build_time_grid(3, 1));
  EXPECT_EQ(g.transport_arc_count(), 3u);
  EXPECT_EQ(g.holdover_arc_count(), 6u);
  for (const Arc& a : g.arcs()) {
    EXPECT_EQ(arc_duration(a), 1);
    if (!a.is_holdover()) {
      EXPECT_EQ(a.arrive, a.depart + 1);
      EXPECT_TRUE(a.window_open);
    }
  }
}

TEST(Expand, SingleNodeNoArcs) {
  std::vector<NodeSpec> nodes{{"A", BodyClass::kSurface}};
  const auto g = expand(nodes, {}, {}, build_time_grid(0, 1));
  EXPECT_TRUE(g.arcs().empty());
}

TEST(Expand, EmptyWindowsCloseArcs) {
  Toy t;
  t.edges[0].windows.clear();
  const auto g = expand(t.nodes, t.edges, t.vehicles, build_time_grid(3, 1));
  for (const Arc& a : g.arcs()) {
    if (!a.is_holdover()) EXPECT_FALSE(a.window_open);
  }
}

TEST(Expand, ArcCountFormula) {
  // Per (vehicle, edge): departures whose arrival stays on the grid.
  std::vector<NodeSpec> nodes{{"A", {}}, {"B", {}}, {"C", {}}};
  std::vector<TransportEdge> edges{{"A", "B", 1, 2, {{0, 10}}, {}},
                                   {"B", "C", 1, 1, {{0, 10}}, {"V1"}},
                                   {"C", "A", 1, 0.2, {{0, 10}}, {}}};
  std::vector<VehicleSpec> vehicles{{"V1", 1, 1, 1, 300, {}}, {"V2", 1, 1, 1, 300, {}}};
  const int points = 6;
  const auto g = expand(nodes, edges, vehicles, build_time_grid(points - 1, 1));
  std::size_t expected = 0;
  for (const auto& e : edges) {
    const int d = steps_for_duration(e.tof_days, 1);
    for (const auto& v : vehicles) {
      if (e.allows(v.id)) expected += static_cast<std::size_t>(points - d);
    }
  }
  EXPECT_EQ(g.transport_arc_count(), expected);
  EXPECT_EQ(g.holdover_arc_count(), nodes.size() * (points - 1));
}

TEST(Expand, WindowMonotonicity) {
  // Widening a window never closes an arc that was open.
  Toy t;
  t.edges[0].windows = {{1, 1}};
  const auto narrow = expand(t.nodes, t.edges, t.vehicles, build_time_grid(5, 1));
  t.edges[0].windows = {{0, 3}};
  const auto wide = expand(t.nodes, t.edges, t.vehicles, build_time_grid(5, 1));
  ASSERT_EQ(narrow.arcs().size(), wide.arcs().size());
  int open_narrow = 0;
  for (std::size_t k = 0; k < narrow.arcs().size(); ++k) {
    if (!narrow.arcs()[k].is_holdover() && narrow.arcs()[k].window_open) {
      ++open_narrow;
      EXPECT_TRUE(wide.arcs()[k].window_open);
    }
  }
  EXPECT_EQ(open_narrow, 1);
}

TEST(Expand, Deterministic) {
  Toy t;
  const auto g1 = expand(t.nodes, t.edges, t.vehicles, build_time_grid(4, 1));
  const auto g2 = expand(t.nodes, t.edges, t.vehicles, build_time_grid(4, 1));
  ASSERT_EQ(g1.arcs().size(), g2.arcs().size());
  for (std::size_t k = 0; k < g1.arcs().size(); ++k) {
    EXPECT_EQ(g1.arcs()[k].from, g2.arcs()[k].from);
    EXPECT_EQ(g1.arcs()[k].depart, g2.arcs()[k].depart);
    EXPECT_EQ(g1.arcs()[k].kind, g2.arcs()[k].kind);
  }
}

}  // namespace
}  // namespace spacelog
