#pragma once

#include <vector>

#include "craneplan/pull_planner.hpp"
#include "craneplan/sim.hpp"

namespace craneplan {

/// Dual-arm rope return: alternating straight-line feeds toward the upper
/// pulley pin until the plate lies flat (tilt <= 1 degree). Empty when the
/// plate is already flat. Pre: the plate is past its tip-through pose.
std::vector<PullCommand> plan_rope_return(const SimWorld& world,
                                          const SimState& state);

}  // namespace craneplan
