#include "swff/chs.hpp"

#include <cmath>
#include <stdexcept>

namespace swff {

int chs_region_index(const Regime& r) {
  if (r.wake) return r.scn_high ? 1 : 2;
  return r.scn_high ? 4 : 3;
}

Trajectory chs_simulate(const ParameterSet& p, const StateVec& y0, double t0,
                        double horizon, const IntegrateOptions& opt) {
  ChsSystem sys(p);
  return integrate_system(sys, y0, sys.initial_regime(y0), t0, horizon, opt);
}

StateVec chs_default_initial_state(const ParameterSet& p) {
  StateVec y = default_initial_state(p);
  y[iFSCN] = scn_drive_limit(sigma_distance(y, p) >= 0.0, p);
  return y;
}

Trajectory chs_simulate_default(const ParameterSet& p, double days,
                                const IntegrateOptions& opt) {
  return chs_simulate(p, chs_default_initial_state(p), 0.0, days * 24.0, opt);
}

std::vector<double> chs_sigma_times(const ParameterSet& p, double theta0,
                                    double t0, double horizon) {
  if (std::fabs(p.beta_SCN) >= 1.0)
    throw std::invalid_argument(
        "circadian line is never crossed for |beta_SCN| >= 1");
  const double om = p.omega();
  const double a = std::acos(p.beta_SCN);  // in [0, pi]
  std::vector<double> out;
  // c(t) = cos(theta0 + omega (t - t0)); crossings where the angle hits
  // +/-a modulo 2 pi. Enumerate both families.
  for (const double root : {a, kTwoPi - a}) {
    // theta0 + omega dt = root + 2 pi n  =>  dt = (root - theta0)/omega + n T
    const double period = kTwoPi / om;
    double dt = std::fmod((root - theta0) / om, period);
    if (dt <= 0.0) dt += period;
    for (double t = dt; t <= horizon + 1e-12; t += period)
      out.push_back(t0 + t);
  }
  std::sort(out.begin(), out.end());
  return out;
}

FoldPair chs_fold_points(bool scn_high, const ParameterSet& p) {
  // scn_drive(+/-1) equals the saturated level for any response width, so
  // the hard-switch folds are the smooth-model folds evaluated at the
  // circadian extremes.
  return fold_points(scn_high ? 1.0 : -1.0, p);
}

Staircase chs_staircase(const std::vector<double>& k_descending,
                        const ParameterSet& base, int jobs,
                        const RotationOptions& opt) {
  const SimulateDays sim = [](const ParameterSet& p, double days) {
    return chs_simulate_default(p, days);
  };
  return staircase(k_descending, base, sim, jobs, opt);
}

}  // namespace swff
