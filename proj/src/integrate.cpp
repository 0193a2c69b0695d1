#include "swff/integrate.hpp"

#include <cmath>

namespace swff {

std::string to_string(EventKind k) {
  switch (k) {
    case EventKind::sleep_onset: return "sleep_onset";
    case EventKind::wake_onset: return "wake_onset";
    case EventKind::circadian_minimum: return "circadian_minimum";
    case EventKind::sigma_crossing_up: return "sigma_crossing_up";
    case EventKind::sigma_crossing_down: return "sigma_crossing_down";
  }
  return "unknown";
}

Trajectory simulate(const ParameterSet& p, const StateVec& y0, double t0,
                    double horizon, const IntegrateOptions& opt) {
  SwffSystem sys(p);
  return integrate_system(sys, y0, sys.initial_regime(y0), t0, horizon, opt);
}

Trajectory simulate_default(const ParameterSet& p, double days,
                            const IntegrateOptions& opt) {
  return simulate(p, default_initial_state(p), 0.0, days * 24.0, opt);
}

DurationStats duration_stats(const Trajectory& tr, double t_discard) {
  DurationStats out;
  double sum_wake = 0.0, sum_sleep = 0.0;
  double sin_sum = 0.0, cos_sum = 0.0;
  std::size_t n_phase = 0;
  const EventRecord* prev = nullptr;
  for (const auto& e : tr.events) {
    if (e.kind != EventKind::sleep_onset && e.kind != EventKind::wake_onset)
      continue;
    if (e.kind == EventKind::sleep_onset && e.t >= t_discard) {
      sin_sum += std::sin(kTwoPi * e.phase);
      cos_sum += std::cos(kTwoPi * e.phase);
      ++n_phase;
    }
    if (prev && prev->t >= t_discard) {
      const double dur = e.t - prev->t;
      if (e.kind == EventKind::sleep_onset) {
        sum_wake += dur;
        ++out.n_wake;
      } else {
        sum_sleep += dur;
        ++out.n_sleep;
      }
    }
    prev = &e;
  }
  if (out.n_wake > 0) out.mean_wake = sum_wake / double(out.n_wake);
  if (out.n_sleep > 0) out.mean_sleep = sum_sleep / double(out.n_sleep);
  if (n_phase > 0) {
    double ph = std::atan2(sin_sum, cos_sum) / kTwoPi;
    if (ph < 0.0) ph += 1.0;
    out.mean_onset_phase = ph;
  }
  return out;
}

}  // namespace swff
