#include "swff/model.hpp"

#include <stdexcept>

namespace swff {

double phase_of_event(double t_event, double t_prev_min) {
  if (t_event < t_prev_min)
    throw std::invalid_argument("event precedes its circadian minimum");
  if (t_event - t_prev_min >= 24.0)
    throw std::invalid_argument("event is not within one circadian cycle");
  return (t_event - t_prev_min) / 24.0;
}

StateVec default_initial_state(const ParameterSet& p) {
  const double theta0 = theta_initial(p);
  const double c0 = std::cos(theta0);
  StateVec y{};
  y[iFW] = 6.0;
  y[iFS] = 0.1;
  y[iFSCN] = scn_drive(c0, p);
  y[iH] = 100.0;
  y[iC] = c0;
  y[iTheta] = theta0;
  return y;
}

}  // namespace swff
