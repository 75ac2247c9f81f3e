#include "uak/sim/spat.hpp"

#include <cmath>

namespace uak::sim {

double SignalSchedule::cycle_length() const {
  double total = 0.0;
  for (const auto& p : phases) total += p.duration;
  return total;
}

behavior::SignalState spat_feed(double t, const SignalSchedule& schedule) {
  behavior::SignalState state;
  state.intersection = schedule.intersection;
  const double cycle = schedule.cycle_length();
  if (schedule.phases.empty() || cycle <= 0.0) {
    state.phase = behavior::SignalPhase::Red;
    state.remaining = 0.0;
    return state;
  }

  double local = std::fmod(t, cycle);
  if (local < 0.0) local += cycle;
  double start = 0.0;
  for (const auto& p : schedule.phases) {
    if (local < start + p.duration) {
      state.phase = p.phase;
      state.remaining = start + p.duration - local;
      return state;
    }
    start += p.duration;
  }
  // Floating-point edge: local landed exactly on the cycle end.
  state.phase = schedule.phases.front().phase;
  state.remaining = schedule.phases.front().duration;
  return state;
}

}  // namespace uak::sim
