#pragma once

#include <vector>

#include "swff/fastslow.hpp"
#include "swff/integrate.hpp"
#include "swff/params.hpp"
#include "swff/rotation.hpp"

namespace swff {

/// Hard-switch circadian vector field: identical to the smooth model except
/// that the pacemaker output relaxes toward its saturated level for the
/// current side of the circadian switching line c = beta_SCN.
inline void chs_vector_field(const StateVec& y, const Regime& r,
                             const ParameterSet& p, StateVec& dy) {
  vector_field(y, r, p, dy);
  dy[iFSCN] = (scn_drive_limit(r.scn_high, p) - y[iFSCN]) / p.tau_SCN;
}

/// Event-driven system for the hard-switch limit. Two switching boundaries:
/// index 0 is the circadian line c = beta_SCN (takes priority on exact
/// ties), index 1 is the wake/sleep threshold f_W = theta_W.
class ChsSystem {
 public:
  explicit ChsSystem(ParameterSet p) : p_(p) { p_.validate(); }

  static constexpr int kNumBoundaries = 2;

  [[nodiscard]] const ParameterSet& params() const { return p_; }

  void deriv(const StateVec& y, const Regime& r, StateVec& dy) const {
    chs_vector_field(y, r, p_, dy);
  }

  [[nodiscard]] double boundary(int b, const StateVec& y) const {
    return b == 0 ? sigma_distance(y, p_) : switch_distance(y, p_);
  }

  [[nodiscard]] static int boundary_axis(int b) { return b == 0 ? iC : iFW; }

  [[nodiscard]] Regime initial_regime(const StateVec& y) const {
    return Regime{switch_distance(y, p_) >= 0.0, sigma_distance(y, p_) >= 0.0};
  }

  [[nodiscard]] Regime after_crossing(const Regime& r, int b, int dir) const {
    Regime out = r;
    if (b == 0) {
      if (r.scn_high != (dir < 0))
        throw OdeError("circadian switch events out of order");
      out.scn_high = dir > 0;
    } else {
      if (r.wake != (dir < 0))
        throw OdeError("wake/sleep events out of order (missed crossing?)");
      out.wake = dir > 0;
    }
    return out;
  }

  [[nodiscard]] static EventKind event_kind(int b, int dir) {
    if (b == 0)
      return dir > 0 ? EventKind::sigma_crossing_up
                     : EventKind::sigma_crossing_down;
    return dir < 0 ? EventKind::sleep_onset : EventKind::wake_onset;
  }

 private:
  ParameterSet p_;
};

/// Region number in 1..4: 1 wake/high pacemaker, 2 wake/low, 3 sleep/low,
/// 4 sleep/high.
[[nodiscard]] int chs_region_index(const Regime& r);

Trajectory chs_simulate(const ParameterSet& p, const StateVec& y0, double t0,
                        double horizon, const IntegrateOptions& opt = {});

/// Default initial condition (pacemaker pinned to the saturated level for
/// the starting side) integrated for the given number of days.
Trajectory chs_simulate_default(const ParameterSet& p, double days,
                                const IntegrateOptions& opt = {});

[[nodiscard]] StateVec chs_default_initial_state(const ParameterSet& p);

/// Closed-form times in (t0, t0 + horizon] at which c(t) crosses beta_SCN,
/// given theta at t0; requires |beta_SCN| < 1. Sorted ascending. Used as an
/// oracle for the event-localized crossing times.
std::vector<double> chs_sigma_times(const ParameterSet& p, double theta0,
                                    double t0, double horizon);

/// Fast-subsystem folds of the hard-switch model for one side of the
/// circadian line. Identical to the smooth-model folds at c = +/-1, for any
/// response width, because the saturated pacemaker levels coincide there.
FoldPair chs_fold_points(bool scn_high, const ParameterSet& p);

/// Rotation-number staircase over a descending k grid in the hard-switch
/// limit.
Staircase chs_staircase(const std::vector<double>& k_descending,
                        const ParameterSet& base, int jobs = 1,
                        const RotationOptions& opt = {});

}  // namespace swff
