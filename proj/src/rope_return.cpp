#include "craneplan/rope_return.hpp"

#include <cmath>

namespace craneplan {

std::vector<PullCommand> plan_rope_return(const SimWorld& world,
                                          const SimState& state) {
  (void)world;
  std::vector<PullCommand> cmds;
  if (tilt_from_table(state) <= deg2rad(1.0)) return cmds;

  // Rope to give back so the plate settles flat, split into alternating
  // hand-over-hand feeds along the line to the pin.
  double span = kPi - state.return_start_rotation;
  double target = kPi - deg2rad(0.5) - state.plate_tilt;
  double budget = span > 0.0
                      ? state.pulled_total_mm * (target / span)
                      : 0.0;
  const double feed_step = 200.0;
  const double grip_depth = 400.0;
  ArmSide arm = ArmSide::Left;
  Point3 pin = state.rope.pin_point;
  double remaining = budget;
  while (remaining > 1e-9) {
    double feed = std::min(feed_step, remaining);
    PullCommand c;
    c.arm = arm;
    c.start = {pin + Vec3{0.0, 0.0, -grip_depth}, frame_from_z({0, 0, -1})};
    c.end = {c.start.position + Vec3{0.0, 0.0, feed},
             c.start.orientation};
    c.path_length_mm = feed;
    cmds.push_back(c);
    remaining -= feed;
    arm = arm == ArmSide::Left ? ArmSide::Right : ArmSide::Left;
  }
  return cmds;
}

}  // namespace craneplan
