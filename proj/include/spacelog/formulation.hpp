#pragma once
// Builds the network-flow MILP at three fidelities.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "spacelog/commodity.hpp"
#include "spacelog/model.hpp"
#include "spacelog/network.hpp"
#include "spacelog/scenario.hpp"

namespace spacelog {

/// Coefficient blocks of one arc restricted to the commodities it carries.
struct ArcPhysics {
  std::vector<int> commodities;  // global commodity indices, ascending
  Eigen::VectorXd cost;          // per local commodity
  Matrix f;                      // local x local
  Matrix h;                      // concurrency rows over local commodities (no pure bound rows)
  std::vector<std::string> h_labels;
  bool at_site = false;
};

/// Scenario resolved into the time-expanded network with per-arc physics.
struct CompiledScenario {
  Scenario scenario;
  CommoditySpace space;
  TimeExpandedGraph graph;
  std::vector<ArcPhysics> arcs;  // parallel to graph.arcs()
  /// Net supply (+) / demand (-) per (node, step, commodity).
  std::map<std::tuple<int, int, int>, double> d;
};

/// Throws Error(kInvalidScenario) carrying validation diagnostics.
CompiledScenario compile_scenario(const Scenario& s);

/// One <= mass-balance row per (node, step, commodity) that has entries or a
/// negative right-hand side; concurrency rows per open arc; closed-arc
/// columns bounded to zero; IMLEO costs on the objective arc.
MilpModel build_full_size(const Scenario& s);
MilpModel assemble_model(const CompiledScenario& cs, const std::string& name = "full_size");

struct PrefixedRatios {
  struct Bundle {
    std::string id;
    std::string site;
    std::vector<std::pair<std::string, double>> fractions;  // subsystem commodity, share
  };
  std::vector<Bundle> bundles;
};

/// Sizes the site chain from the reference production rate, storage to hold
/// one launch interval of net output (times storage_scale), power and energy
/// storage at equality with their rows, then normalizes.
PrefixedRatios derive_prefixed_ratios(const Scenario& s);

/// Substitutes x_s = r_s * y on every arc for each subsystem s of a bundle.
MilpModel build_prefixed(const Scenario& s, const PrefixedRatios& ratios);

struct PackingPlan;
MilpModel build_multifidelity(const Scenario& s, const PackingPlan& plan);

/// Column of (arc, commodity) in an unpacked model, or -1.
std::map<std::pair<int, int>, int> column_index(const MilpModel& m);

}  // namespace spacelog
