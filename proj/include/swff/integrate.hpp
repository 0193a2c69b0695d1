#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "swff/model.hpp"
#include "swff/ode.hpp"
#include "swff/params.hpp"

namespace swff {

enum class EventKind {
  sleep_onset,
  wake_onset,
  circadian_minimum,
  sigma_crossing_up,
  sigma_crossing_down,
};

[[nodiscard]] std::string to_string(EventKind k);

struct EventRecord {
  EventKind kind;
  double t;
  StateVec y;
  /// Product of the boundary-normal velocity evaluated in the pre- and
  /// post-crossing regimes; NaN for circadian minima.
  double crossing_product;
  /// Circadian phase of the event in [0, 1); 0 at circadian minima.
  double phase;
};

struct Trajectory {
  std::vector<double> t;
  std::vector<StateVec> y;
  std::vector<Regime> regime;
  std::vector<EventRecord> events;
  double t_final = 0.0;
  StateVec y_final{};
  Regime regime_final{};
  /// Minimum crossing product over all boundary events (+inf when none).
  double min_crossing_product = std::numeric_limits<double>::infinity();

  [[nodiscard]] std::vector<EventRecord> events_of_kind(EventKind k) const {
    std::vector<EventRecord> out;
    for (const auto& e : events)
      if (e.kind == k) out.push_back(e);
    return out;
  }
  [[nodiscard]] std::size_t count_events(EventKind k) const {
    std::size_t n = 0;
    for (const auto& e : events) n += (e.kind == k);
    return n;
  }
};

struct IntegrateOptions {
  double rtol = 1e-9;
  double atol = 1e-11;
  double h_max = 4.0;
  double h_init = 1e-3;
  double event_tol = 1e-9;  // hours
  bool record_samples = false;
  double sample_dt = 0.05;  // hours
  /// When > 0, stop exactly at the N-th sleep-onset event.
  int stop_after_sleep_onsets = 0;
};

/// The smooth-circadian model as an event-driven system: one switching
/// boundary (f_W = theta_W) toggling the homeostatic regime.
class SwffSystem {
 public:
  explicit SwffSystem(ParameterSet p) : p_(p) { p_.validate(); }

  static constexpr int kNumBoundaries = 1;

  [[nodiscard]] const ParameterSet& params() const { return p_; }

  void deriv(const StateVec& y, const Regime& r, StateVec& dy) const {
    vector_field(y, r, p_, dy);
  }

  [[nodiscard]] double boundary(int, const StateVec& y) const {
    return switch_distance(y, p_);
  }

  [[nodiscard]] static int boundary_axis(int) { return iFW; }

  [[nodiscard]] Regime initial_regime(const StateVec& y) const {
    return Regime{switch_distance(y, p_) >= 0.0, sigma_distance(y, p_) >= 0.0};
  }

  [[nodiscard]] Regime after_crossing(const Regime& r, int, int dir) const {
    if (r.wake != (dir < 0))
      throw OdeError("wake/sleep events out of order (missed crossing?)");
    Regime out = r;
    out.wake = dir > 0;
    return out;
  }

  [[nodiscard]] static EventKind event_kind(int, int dir) {
    return dir < 0 ? EventKind::sleep_onset : EventKind::wake_onset;
  }

 private:
  ParameterSet p_;
};

namespace detail {

/// Bisection on dense output with an authoritative pre-crossing sign for the
/// low end (robust against floating-point noise right after a restart).
template <typename Boundary, typename Eval>
double locate_crossing(Boundary g, Eval eval, double t_lo, double t_hi,
                       int sign_lo, double tol) {
  double g_hi = g(eval(t_hi));
  while (t_hi - t_lo > tol) {
    const double tm = 0.5 * (t_lo + t_hi);
    const double gm = g(eval(tm));
    if (gm == 0.0) return tm;
    if ((gm > 0.0 ? 1 : -1) == sign_lo) {
      t_lo = tm;
    } else {
      t_hi = tm;
      g_hi = gm;
    }
  }
  const double g_lo = g(eval(t_lo));
  if ((g_lo > 0.0) != (g_hi > 0.0) && g_hi != g_lo) {
    const double t_star = t_lo + (t_hi - t_lo) * (-g_lo) / (g_hi - g_lo);
    return std::clamp(t_star, t_lo, t_hi);
  }
  return 0.5 * (t_lo + t_hi);
}

}  // namespace detail

/// Integrates an event-driven system from (t0, y0, r0) over `horizon` hours.
/// Switching events are localized on dense output to opt.event_tol and the
/// integration restarts at each one; circadian minima are recorded at their
/// closed-form times. Boundary index order breaks exact-tie events (lower
/// index first).
template <typename System>
Trajectory integrate_system(const System& sys, const StateVec& y0, Regime r0,
                            double t0, double horizon,
                            const IntegrateOptions& opt = {}) {
  if (!(horizon > 0.0)) throw OdeError("integrate: horizon must be positive");
  const double t_end = t0 + horizon;
  constexpr int kNB = System::kNumBoundaries;
  constexpr int kScanNodes = 16;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  Trajectory tr;
  Regime regime = r0;
  auto rhs = [&sys, &regime](const StateVec& y, StateVec& dy) {
    sys.deriv(y, regime, dy);
  };
  Dp5Stepper<decltype(rhs)> st(rhs, t0, y0,
                               {opt.rtol, opt.atol, opt.h_max, opt.h_init});

  std::array<int, kNB> sign{};
  for (int b = 0; b < kNB; ++b) {
    const double g = sys.boundary(b, y0);
    if (g != 0.0) {
      sign[b] = g > 0.0 ? 1 : -1;
    } else {
      StateVec dy;
      sys.deriv(y0, regime, dy);
      sign[b] = dy[System::boundary_axis(b)] >= 0.0 ? 1 : -1;
    }
  }

  // Circadian minima lie at theta = pi (mod 2*pi); theta is globally linear.
  const double omega = sys.params().omega();
  const double theta0 = y0[iTheta];
  auto minimum_time = [&](long n) {
    return t0 + (kPi + kTwoPi * static_cast<double>(n) - theta0) / omega;
  };
  long n_min = static_cast<long>(std::ceil((theta0 - kPi) / kTwoPi));
  while (minimum_time(n_min) <= t0) ++n_min;

  long sample_idx = 0;
  if (opt.record_samples) {
    tr.t.push_back(t0);
    tr.y.push_back(y0);
    tr.regime.push_back(regime);
    sample_idx = 1;
  }
  auto emit_until = [&](double t_seg_end) {
    // Minima and uniform samples inside (previous emit point, t_seg_end].
    while (minimum_time(n_min) <= t_seg_end + 1e-12) {
      const double tm = minimum_time(n_min);
      tr.events.push_back(
          {EventKind::circadian_minimum, tm, st.dense(tm), nan, 0.0});
      ++n_min;
    }
    if (opt.record_samples) {
      for (;; ++sample_idx) {
        const double ts = t0 + static_cast<double>(sample_idx) * opt.sample_dt;
        if (ts > t_seg_end + 1e-12) break;
        tr.t.push_back(ts);
        tr.y.push_back(st.dense(ts));
        tr.regime.push_back(regime);
      }
    }
  };

  int onsets = 0;
  bool done = false;
  const double t_eps = 1e-12 * std::max(1.0, std::fabs(t_end));
  while (!done && t_end - st.t() > t_eps) {
    st.step_to(t_end);
    const double ta = st.t_prev();
    const double tb = st.t();

    int best_b = -1, best_dir = 0;
    double best_t = 0.0;
    for (int b = 0; b < kNB; ++b) {
      int s_run = sign[b];
      for (int j = 1; j <= kScanNodes; ++j) {
        const double tj = (j == kScanNodes)
                              ? tb
                              : ta + (tb - ta) * j / double(kScanNodes);
        const double gj = sys.boundary(b, j == kScanNodes ? st.y() : st.dense(tj));
        const int sj = gj > 0.0 ? 1 : (gj < 0.0 ? -1 : 0);
        if (sj != 0 && sj != s_run) {
          const double tjm = ta + (tb - ta) * (j - 1) / double(kScanNodes);
          double te = detail::locate_crossing(
              [&](const StateVec& y) { return sys.boundary(b, y); },
              [&](double t) { return st.dense(t); }, tjm, tj, s_run,
              opt.event_tol);
          // Progress floor: never restart exactly at the segment start.
          te = std::max(te, ta + opt.event_tol);
          if (best_b < 0 || te < best_t - opt.event_tol) {
            best_b = b;
            best_dir = sj;
            best_t = te;
          }
          break;
        }
        if (sj != 0) s_run = sj;
      }
    }

    if (best_b >= 0) {
      const StateVec ye = st.dense(best_t);
      emit_until(best_t);
      StateVec dy_pre, dy_post;
      sys.deriv(ye, regime, dy_pre);
      const Regime r_post = sys.after_crossing(regime, best_b, best_dir);
      sys.deriv(ye, r_post, dy_post);
      const int ax = System::boundary_axis(best_b);
      const double prod = dy_pre[ax] * dy_post[ax];
      const EventKind kind = System::event_kind(best_b, best_dir);
      tr.events.push_back(
          {kind, best_t, ye, prod, phase_of_theta(ye[iTheta])});
      tr.min_crossing_product = std::min(tr.min_crossing_product, prod);
      regime = r_post;
      sign[best_b] = best_dir;
      for (int b = 0; b < kNB; ++b) {
        if (b == best_b) continue;
        const double g = sys.boundary(b, ye);
        if (g != 0.0) sign[b] = g > 0.0 ? 1 : -1;
      }
      if (kind == EventKind::sleep_onset &&
          opt.stop_after_sleep_onsets > 0 &&
          ++onsets >= opt.stop_after_sleep_onsets) {
        tr.t_final = best_t;
        tr.y_final = ye;
        tr.regime_final = regime;
        done = true;
        break;
      }
      st.reset(best_t, ye);
    } else {
      emit_until(tb);
      for (int b = 0; b < kNB; ++b) {
        const double g = sys.boundary(b, st.y());
        if (g != 0.0) sign[b] = g > 0.0 ? 1 : -1;
      }
    }
  }

  if (!done) {
    tr.t_final = st.t();
    tr.y_final = st.y();
    tr.regime_final = regime;
  }
  if (opt.record_samples &&
      (tr.t.empty() || tr.t.back() < tr.t_final - 1e-12)) {
    tr.t.push_back(tr.t_final);
    tr.y.push_back(tr.y_final);
    tr.regime.push_back(tr.regime_final);
  }
  return tr;
}

/// Convenience wrapper for the smooth model with the regime inferred from
/// the initial state.
Trajectory simulate(const ParameterSet& p, const StateVec& y0, double t0,
                    double horizon, const IntegrateOptions& opt = {});

/// Long run from the canonical initial state.
Trajectory simulate_default(const ParameterSet& p, double days,
                            const IntegrateOptions& opt = {});

struct TransversalityReport {
  std::size_t n_checked = 0;
  std::size_t n_violations = 0;
  double min_product = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> violation_event_indices;
};

/// Re-evaluates the crossing product at every boundary event of the
/// trajectory from the stored event states, using the pre- and post-crossing
/// vector fields; a product below -eps is a violation.
template <typename System>
TransversalityReport verify_transversality(const System& sys,
                                           const Trajectory& tr,
                                           double eps = 1e-10) {
  TransversalityReport rep;
  const ParameterSet& p = sys.params();
  for (std::size_t i = 0; i < tr.events.size(); ++i) {
    const EventRecord& e = tr.events[i];
    if (e.kind == EventKind::circadian_minimum) continue;
    Regime pre, post;
    int axis;
    if (e.kind == EventKind::sleep_onset || e.kind == EventKind::wake_onset) {
      axis = iFW;
      pre.wake = e.kind == EventKind::sleep_onset;
      post.wake = !pre.wake;
      pre.scn_high = post.scn_high = sigma_distance(e.y, p) >= 0.0;
    } else {
      axis = iC;
      pre.scn_high = e.kind == EventKind::sigma_crossing_down;
      post.scn_high = !pre.scn_high;
      pre.wake = post.wake = switch_distance(e.y, p) >= 0.0;
    }
    StateVec d_pre, d_post;
    sys.deriv(e.y, pre, d_pre);
    sys.deriv(e.y, post, d_post);
    const double prod = d_pre[axis] * d_post[axis];
    rep.n_checked++;
    rep.min_product = std::min(rep.min_product, prod);
    if (prod < -eps) {
      rep.n_violations++;
      rep.violation_event_indices.push_back(i);
    }
  }
  return rep;
}

struct DurationStats {
  double mean_wake = 0.0;
  double mean_sleep = 0.0;
  std::size_t n_wake = 0;
  std::size_t n_sleep = 0;
  /// Circular mean of sleep-onset phases in the measured window.
  double mean_onset_phase = 0.0;
};

/// Mean wake/sleep episode durations and mean sleep-onset phase over events
/// at t >= t_discard (complete episodes only).
DurationStats duration_stats(const Trajectory& tr, double t_discard);

}  // namespace swff
