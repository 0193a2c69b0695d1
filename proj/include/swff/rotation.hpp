#pragma once

#include <functional>
#include <vector>

#include "swff/integrate.hpp"
#include "swff/params.hpp"

namespace swff {

/// Rotation number rho = q / p: q circadian days per p sleep episodes.
struct RotationResult {
  long p = 0;
  long q = 0;
  double rho = 0.0;
  /// True when a repeating onset-phase pattern was detected (p, q reduced);
  /// false for the long-horizon averaging fallback (raw counts kept).
  bool exact = false;
};

struct RotationOptions {
  double days = 100.0;
  /// Circular tolerance for onset-phase pattern matching.
  double tol = 3e-4;
  /// Additional pattern periods that must match before a result is exact.
  int confirm_periods = 3;
  double fallback_days = 120.0;
};

/// Sleep-onset times/phases and circadian-minimum times of one run.
struct OnsetSeries {
  std::vector<double> t;
  std::vector<double> phase;
  std::vector<double> minima_t;
};

OnsetSeries onset_series(const Trajectory& tr);

/// Pattern scan over an onset series: walks backward from the last onset to
/// the nearest prior onset with a matching phase, confirms the period over
/// further repeats, and counts the circadian minima spanned (half-open
/// interval). Returns exact = false when no confirmed pattern exists.
RotationResult detect_rotation(const OnsetSeries& s,
                               const RotationOptions& opt = {});

using SimulateDays =
    std::function<Trajectory(const ParameterSet&, double days)>;

/// Simulates `opt.days`, runs detect_rotation, and on failure falls back to
/// total-days / total-sleeps averaging over `opt.fallback_days`.
/// Throws OdeError when the run produces no sleep onsets at all.
RotationResult rotation_number(const ParameterSet& p, const SimulateDays& sim,
                               const RotationOptions& opt = {});

/// Same, on the smooth model from the canonical initial state.
RotationResult rotation_number(const ParameterSet& p,
                               const RotationOptions& opt = {});

struct StaircaseCell {
  double k = 0.0;
  RotationResult rot;
};

struct Plateau {
  double k_lo = 0.0;
  double k_hi = 0.0;
  long p = 0;
  long q = 0;
  double rho = 0.0;
};

struct Staircase {
  std::vector<StaircaseCell> cells;  // k strictly decreasing
  std::vector<Plateau> plateaus;     // maximal runs of equal exact (p, q)
};

/// Strictly decreasing grid from k_hi to k_lo inclusive with the given step.
std::vector<double> descending_grid(double k_hi, double k_lo, double step);

/// Rotation number per k cell (parallel over cells), plus plateau
/// extraction. Non-exact cells never join a plateau.
Staircase staircase(const std::vector<double>& k_descending,
                    const ParameterSet& base, const SimulateDays& sim,
                    int jobs = 1, const RotationOptions& opt = {});

struct FareyPairReport {
  Plateau hi;  // larger rho
  Plateau lo;  // smaller rho
  bool applicable = false;  // |q_hi * p_lo - q_lo * p_hi| == 1
  long mediant_p = 0;
  long mediant_q = 0;
  bool found = false;
  double k_found = 0.0;
};

/// For each adjacent plateau pair with unimodular rho values, bisects the
/// intervening k-gap for a cell whose exact rotation number equals the
/// mediant.
std::vector<FareyPairReport> farey_check(const Staircase& s,
                                         const ParameterSet& base,
                                         const SimulateDays& sim,
                                         int budget = 18,
                                         const RotationOptions& opt = {});

}  // namespace swff
