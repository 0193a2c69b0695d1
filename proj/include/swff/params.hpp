#pragma once

#include <string>

#include <json.hpp>

namespace swff {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Model parameters. Defaults reproduce the reference parameter set; time in
/// hours, firing rates in Hz, h in percent slow-wave-activity units.
struct ParameterSet {
  double W_max = 6.0;
  double tau_W = 0.1;
  double alpha_W = 0.5;
  double beta_W = -0.37;

  double S_max = 6.0;
  double tau_S = 0.1;
  double alpha_S = 0.175;

  double SCN_max = 7.0;
  double tau_SCN = 0.05;
  double alpha_SCN = 0.7;
  double beta_SCN = 0.0;

  double g_sw = 0.3;     // S -| W
  double g_scnw = 0.06;  // SCN -> W
  double g_ws = 0.28;    // W -| S
  double g_scns = 0.0825;  // SCN -| S

  double h_max = 323.88;
  double h_min = 0.0;
  double tau_hw = 15.78;
  double tau_hs = 3.37;
  double k1 = -0.1;
  double k2 = -0.006;

  double theta_W = 4.0;  // switching threshold on f_W

  double k = 1.0;    // scales tau_hw and tau_hs together
  double phi = 0.0;  // circadian phase offset, hours

  [[nodiscard]] double omega() const { return kTwoPi / 24.0; }

  /// Throws std::invalid_argument when a value is outside its admissible
  /// range (k in (0,1], alpha_SCN in (0,3], positive time constants and
  /// sigmoid widths, h_min < h_max).
  void validate() const;
};

[[nodiscard]] nlohmann::json to_json(const ParameterSet& p);

/// Builds a ParameterSet from a flat JSON object. Missing keys keep their
/// defaults; unknown keys are rejected. The result is validated.
[[nodiscard]] ParameterSet params_from_json(const nlohmann::json& j);

}  // namespace swff
