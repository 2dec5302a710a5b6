#pragma once
// Small random scenarios for property runs: at most 4 nodes, 6 grid points,
// 6 commodities and 2 vehicle (integer) commodities.

#include <cstdint>

#include "spacelog/scenario.hpp"

namespace spacelog {

/// Deterministic for a given seed on a given standard library. The result
/// always validates; it may still be infeasible as an optimization problem.
Scenario random_scenario(std::uint64_t seed);

}  // namespace spacelog
