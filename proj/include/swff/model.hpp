#pragma once

#include <array>
#include <cmath>

#include "swff/params.hpp"

namespace swff {

inline constexpr double kPi = 3.1415926535897932384626433832795;

/// State layout: [f_W, f_S, f_SCN, h, c, theta].
using StateVec = std::array<double, 6>;

enum StateIndex : int { iFW = 0, iFS = 1, iFSCN = 2, iH = 3, iC = 4, iTheta = 5 };

struct ModelState {
  double f_W = 0.0;
  double f_S = 0.0;
  double f_SCN = 0.0;
  double h = 0.0;
  double c = 0.0;
  double theta = 0.0;

  static ModelState from_array(const StateVec& y) {
    return {y[iFW], y[iFS], y[iFSCN], y[iH], y[iC], y[iTheta]};
  }
  [[nodiscard]] StateVec to_array() const {
    return {f_W, f_S, f_SCN, h, c, theta};
  }
};

/// Dynamical regime. `wake` selects the homeostatic branch; `scn_high`
/// selects the circadian branch and is used only by the hard-switch model.
struct Regime {
  bool wake = true;
  bool scn_high = true;
};

// ---- steady-state response functions ----

inline double wake_drive(double x, const ParameterSet& p) {
  return p.W_max * 0.5 * (1.0 + std::tanh((x - p.beta_W) / p.alpha_W));
}

inline double wake_drive_dx(double x, const ParameterSet& p) {
  const double u = std::tanh((x - p.beta_W) / p.alpha_W);
  return p.W_max * 0.5 * (1.0 - u * u) / p.alpha_W;
}

/// Homeostat-dependent activation threshold of the sleep population.
inline double sleep_threshold(double h, const ParameterSet& p) {
  return p.k2 * h + p.k1;
}

inline double sleep_drive(double x, double h, const ParameterSet& p) {
  return p.S_max * 0.5 * (1.0 + std::tanh((x - sleep_threshold(h, p)) / p.alpha_S));
}

inline double sleep_drive_dx(double x, double h, const ParameterSet& p) {
  const double u = std::tanh((x - sleep_threshold(h, p)) / p.alpha_S);
  return p.S_max * 0.5 * (1.0 - u * u) / p.alpha_S;
}

/// Normalization that keeps scn_drive(+1) and scn_drive(-1) independent of
/// alpha_SCN while the midpoint slope varies.
inline double scn_gain(const ParameterSet& p) {
  return std::tanh(1.0 / 0.7) / std::tanh(1.0 / p.alpha_SCN);
}

inline double scn_drive(double c, const ParameterSet& p) {
  return p.SCN_max * 0.5 *
         (1.0 + scn_gain(p) * std::tanh((c - p.beta_SCN) / p.alpha_SCN));
}

/// Limit of scn_drive as the sigmoid width goes to zero, per side of
/// c = beta_SCN. Equals scn_drive(+/-1, p) for every admissible alpha_SCN.
inline double scn_drive_limit(bool scn_high, const ParameterSet& p) {
  const double a = std::tanh(1.0 / 0.7);
  return p.SCN_max * 0.5 * (scn_high ? 1.0 + a : 1.0 - a);
}

// ---- circadian drive ----
//
// theta is integrated without wrapping, theta(0) = -phi * omega, so that
// c = cos(theta) = cos((t - phi) * omega) holds along consistent solutions
// and circadian minima sit at theta = pi (mod 2*pi).

inline double theta_initial(const ParameterSet& p) { return -p.phi * p.omega(); }

inline double circadian_c(double t, const ParameterSet& p) {
  return std::cos((t - p.phi) * p.omega());
}

inline double circadian_theta(double t, const ParameterSet& p) {
  return (t - p.phi) * p.omega();
}

/// Phase of a state relative to the preceding circadian minimum, in [0, 1).
inline double phase_of_theta(double theta) {
  double ph = std::fmod((theta - kPi) / kTwoPi, 1.0);
  if (ph < 0.0) ph += 1.0;
  return ph;
}

/// theta value (in [pi, 3*pi)) whose circadian phase is `phase`.
inline double theta_at_phase(double phase) { return kPi + kTwoPi * phase; }

/// Phase of an event from explicit times: (t_event - t_prev_min) / 24.
/// Throws if the event precedes the claimed minimum or trails it by >= 24 h.
double phase_of_event(double t_event, double t_prev_min);

/// Circular distance between two phases in [0, 1).
inline double phase_distance(double a, double b) {
  double d = std::fabs(a - b);
  d = std::fmod(d, 1.0);
  return d <= 0.5 ? d : 1.0 - d;
}

// ---- vector field ----

/// Smooth vector field of the model in the given regime (scn_high ignored).
inline void vector_field(const StateVec& y, const Regime& r,
                         const ParameterSet& p, StateVec& dy) {
  const double fW = y[iFW];
  const double fS = y[iFS];
  const double fSCN = y[iFSCN];
  const double h = y[iH];
  dy[iFW] = (wake_drive(p.g_scnw * fSCN - p.g_sw * fS, p) - fW) / p.tau_W;
  dy[iFS] =
      (sleep_drive(-p.g_ws * fW - p.g_scns * fSCN, h, p) - fS) / p.tau_S;
  dy[iFSCN] = (scn_drive(y[iC], p) - fSCN) / p.tau_SCN;
  dy[iH] = r.wake ? (p.h_max - h) / (p.k * p.tau_hw)
                  : (p.h_min - h) / (p.k * p.tau_hs);
  dy[iC] = -p.omega() * std::sin(y[iTheta]);
  dy[iTheta] = p.omega();
}

/// Signed distance to the wake/sleep switching boundary (f_W = theta_W).
inline double switch_distance(const StateVec& y, const ParameterSet& p) {
  return y[iFW] - p.theta_W;
}

/// Signed distance to the circadian switching boundary (c = beta_SCN).
inline double sigma_distance(const StateVec& y, const ParameterSet& p) {
  return y[iC] - p.beta_SCN;
}

/// Canonical initial state used for long runs: awake, low sleep drive,
/// mid-range homeostat, circadian variables consistent at t = 0.
StateVec default_initial_state(const ParameterSet& p);

}  // namespace swff
