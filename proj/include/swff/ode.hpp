#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "swff/model.hpp"

namespace swff {

/// Raised when adaptive stepping cannot proceed (step-size underflow) or an
/// internal consistency check fails during integration.
struct OdeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Dp5Options {
  double rtol = 1e-9;
  double atol = 1e-11;
  double h_max = 4.0;
  double h_init = 1e-3;
};

/// Dormand-Prince 5(4) stepper with 4th-order-continuous dense output.
/// Rhs must be callable as rhs(const StateVec&, StateVec&). The system is
/// treated as autonomous (time enters only through the state).
template <typename Rhs>
class Dp5Stepper {
 public:
  Dp5Stepper(Rhs rhs, double t0, const StateVec& y0, Dp5Options opt = {})
      : rhs_(rhs), opt_(opt) {
    reset(t0, y0);
  }

  /// Restart at (t, y): clears step history and re-evaluates the derivative
  /// (required whenever the right-hand side changed discontinuously).
  void reset(double t, const StateVec& y) {
    t_ = t_prev_ = t;
    y_ = y_prev_ = y;
    rhs_(y_, k1_);
    if (h_next_ <= 0.0) h_next_ = opt_.h_init;
    have_step_ = false;
  }

  /// Advance one accepted step, never beyond t_limit. Returns the new time.
  double step_to(double t_limit) {
    if (t_limit <= t_) throw OdeError("step_to: limit not ahead of time");
    double h = std::min({h_next_, opt_.h_max, t_limit - t_});
    bool rejected = false;
    for (int attempt = 0; attempt < 1000; ++attempt) {
      if (h < 1e-14 * std::max(1.0, std::fabs(t_)))
        throw OdeError("step size underflow");
      const double err = try_step(h);
      const double fac =
          std::clamp(kSafety * std::pow(err > 0.0 ? err : 1e-10, -0.2),
                     kFacMin, rejected ? 1.0 : kFacMax);
      if (err <= 1.0) {
        accept_step(h);
        h_next_ = std::min(h * fac, opt_.h_max);
        return t_;
      }
      rejected = true;
      h *= fac;
    }
    throw OdeError("step repeatedly rejected");
  }

  [[nodiscard]] double t() const { return t_; }
  [[nodiscard]] double t_prev() const { return t_prev_; }
  [[nodiscard]] const StateVec& y() const { return y_; }
  [[nodiscard]] const StateVec& y_prev() const { return y_prev_; }

  /// Dense-output evaluation; valid on [t_prev, t] of the last accepted step.
  [[nodiscard]] StateVec dense(double t) const {
    if (!have_step_) throw OdeError("dense output requested before a step");
    const double s = std::clamp((t - t_prev_) / h_last_, 0.0, 1.0);
    const double s1 = 1.0 - s;
    StateVec out;
    for (int i = 0; i < 6; ++i) {
      out[i] = rc1_[i] +
               s * (rc2_[i] + s1 * (rc3_[i] + s * (rc4_[i] + s1 * rc5_[i])));
    }
    return out;
  }

 private:
  static constexpr double kSafety = 0.9;
  static constexpr double kFacMin = 0.2;
  static constexpr double kFacMax = 10.0;

  // Attempts a step of size h from (t_, y_); fills stages and y_trial_.
  // Returns the scaled error norm.
  double try_step(double h) {
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113,
                            a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                            a76 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                            e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;

    StateVec w;
    for (int i = 0; i < 6; ++i) w[i] = y_[i] + h * a21 * k1_[i];
    rhs_(w, k2_);
    for (int i = 0; i < 6; ++i)
      w[i] = y_[i] + h * (a31 * k1_[i] + a32 * k2_[i]);
    rhs_(w, k3_);
    for (int i = 0; i < 6; ++i)
      w[i] = y_[i] + h * (a41 * k1_[i] + a42 * k2_[i] + a43 * k3_[i]);
    rhs_(w, k4_);
    for (int i = 0; i < 6; ++i)
      w[i] = y_[i] +
             h * (a51 * k1_[i] + a52 * k2_[i] + a53 * k3_[i] + a54 * k4_[i]);
    rhs_(w, k5_);
    for (int i = 0; i < 6; ++i)
      w[i] = y_[i] + h * (a61 * k1_[i] + a62 * k2_[i] + a63 * k3_[i] +
                          a64 * k4_[i] + a65 * k5_[i]);
    rhs_(w, k6_);
    for (int i = 0; i < 6; ++i)
      y_trial_[i] = y_[i] + h * (a71 * k1_[i] + a73 * k3_[i] + a74 * k4_[i] +
                                 a75 * k5_[i] + a76 * k6_[i]);
    rhs_(y_trial_, k7_);

    double sum = 0.0;
    for (int i = 0; i < 6; ++i) {
      const double sc =
          opt_.atol +
          opt_.rtol * std::max(std::fabs(y_[i]), std::fabs(y_trial_[i]));
      const double e = h * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] +
                            e5 * k5_[i] + e6 * k6_[i] + e7 * k7_[i]);
      sum += (e / sc) * (e / sc);
    }
    return std::sqrt(sum / 6.0);
  }

  void accept_step(double h) {
    static constexpr double d1 = -12715105075.0 / 11282082432.0;
    static constexpr double d3 = 87487479700.0 / 32700410799.0;
    static constexpr double d4 = -10690763975.0 / 1880347072.0;
    static constexpr double d5 = 701980252875.0 / 199316789632.0;
    static constexpr double d6 = -1453857185.0 / 822651844.0;
    static constexpr double d7 = 69997945.0 / 29380423.0;
    for (int i = 0; i < 6; ++i) {
      const double ydiff = y_trial_[i] - y_[i];
      const double bspl = h * k1_[i] - ydiff;
      rc1_[i] = y_[i];
      rc2_[i] = ydiff;
      rc3_[i] = bspl;
      rc4_[i] = ydiff - h * k7_[i] - bspl;
      rc5_[i] = h * (d1 * k1_[i] + d3 * k3_[i] + d4 * k4_[i] + d5 * k5_[i] +
                     d6 * k6_[i] + d7 * k7_[i]);
    }
    t_prev_ = t_;
    y_prev_ = y_;
    t_ += h;
    y_ = y_trial_;
    k1_ = k7_;  // first-same-as-last
    h_last_ = h;
    have_step_ = true;
  }

  Rhs rhs_;
  Dp5Options opt_;
  double t_ = 0.0, t_prev_ = 0.0;
  StateVec y_{}, y_prev_{}, y_trial_{};
  StateVec k1_{}, k2_{}, k3_{}, k4_{}, k5_{}, k6_{}, k7_{};
  StateVec rc1_{}, rc2_{}, rc3_{}, rc4_{}, rc5_{};
  double h_next_ = 0.0;
  double h_last_ = 0.0;
  bool have_step_ = false;
};

/// Locates a sign change of `event_fn` over [t_lo, t_hi] given `eval`
/// mapping time to state. Refines by bisection to width `tol`, then places
/// the root by linear interpolation inside the final bracket (exact for
/// affine event functions). Endpoint roots are returned as-is.
template <typename EventFn, typename Eval>
double event_time(double t_lo, double t_hi, EventFn event_fn, Eval eval,
                  double tol) {
  double g_lo = event_fn(eval(t_lo));
  double g_hi = event_fn(eval(t_hi));
  if (g_lo == 0.0) return t_lo;
  if (g_hi == 0.0) return t_hi;
  if ((g_lo > 0.0) == (g_hi > 0.0))
    throw OdeError("event_time: no sign change over bracket");
  while (t_hi - t_lo > tol) {
    const double tm = 0.5 * (t_lo + t_hi);
    const double gm = event_fn(eval(tm));
    if (gm == 0.0) return tm;
    if ((gm > 0.0) == (g_lo > 0.0)) {
      t_lo = tm;
      g_lo = gm;
    } else {
      t_hi = tm;
      g_hi = gm;
    }
  }
  const double t_star = t_lo + (t_hi - t_lo) * (-g_lo) / (g_hi - g_lo);
  return std::clamp(t_star, t_lo, t_hi);
}

}  // namespace swff
