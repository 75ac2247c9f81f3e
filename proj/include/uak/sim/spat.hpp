#pragma once

#include <vector>

#include "uak/behavior/tsps.hpp"

namespace uak::sim {

struct PhaseSpec {
  behavior::SignalPhase phase = behavior::SignalPhase::Red;
  double duration = 0.0;  // [s]
};

// Repeating signal cycle for one intersection.
struct SignalSchedule {
  std::string intersection;
  std::vector<PhaseSpec> phases;

  double cycle_length() const;
};

// Phase and remaining time at simulation time t, by modular lookup over the
// cycle. Phases occupy closed-open intervals, so an exact boundary belongs
// to the phase that starts there.
behavior::SignalState spat_feed(double t, const SignalSchedule& schedule);

}  // namespace uak::sim
