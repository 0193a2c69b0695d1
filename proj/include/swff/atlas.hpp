#pragma once

#include <array>
#include <vector>

#include "swff/circlemap.hpp"
#include "swff/params.hpp"
#include "swff/rotation.hpp"

namespace swff {

/// One alpha row of a locking tongue: the k-interval with exact rotation
/// q/p, edges located by bisection to dk_tol.
struct TongueRow {
  double alpha_scn = 0.0;
  double k_lo = 0.0;
  double k_hi = 0.0;
  bool found = false;
};

/// Locates the q/p tongue edges at one alpha. `k_seed` must lie inside the
/// tongue or within `scan_halfwidth` of it (a descending scan around the
/// seed finds a locked cell first).
TongueRow locate_tongue(int q, int p, double alpha_scn, double k_seed,
                        const ParameterSet& base, const SimulateDays& sim,
                        double dk_tol = 1e-3, double scan_halfwidth = 0.08,
                        double scan_step = 2e-3);

/// Tongue width rows across alphas, warm-starting each row from the
/// previous one.
std::vector<TongueRow> tongue_rows(int q, int p,
                                   const std::vector<double>& alphas,
                                   double k_seed, const ParameterSet& base,
                                   const SimulateDays& sim,
                                   double dk_tol = 1e-3);

/// All fixed-point inventory changes of the order-p map across
/// [k_lo, k_hi] at one alpha, located to dk_tol and classified. Maps are
/// built from `n_nodes` equally spaced seeds; the fold cache is shared.
std::vector<BifurcationRecord> map_events_in_range(
    int order, double alpha_scn, double k_hi, double k_lo, int n_nodes,
    const ParameterSet& base, const MapOptions& map_opt = {},
    double dk_tol = 1e-3);

/// Bifurcation sequence across one tongue (edges padded outward) in
/// descending k, with membership in the known sequence grammar.
struct TongueTransition {
  double alpha_scn = 0.0;
  TongueRow edges;
  std::vector<BifurcationRecord> records;  // descending k
  bool grammar_ok = false;
};

TongueTransition tongue_transition(int q, int p, double alpha_scn,
                                   double k_seed, const ParameterSet& base,
                                   const SimulateDays& sim,
                                   const MapOptions& map_opt = {},
                                   double pad = 6e-3, double dk_tol = 1e-3);

/// Matches a descending-k kind sequence against the catalogue of observed
/// tongue-crossing sequences.
bool sequence_in_grammar(const std::vector<BifKind>& seq);

/// Stable second-return families at one (k, alpha) cell, with distinct
/// attractors confirmed by long integrations seeded near each family.
struct BistabilityCell {
  double k = 0.0;
  double alpha_scn = 0.0;
  int n_stable_families = 0;
  bool bistable = false;
  bool basin_confirmed = false;
  std::vector<double> family_phi;  // one representative phase per family
};

BistabilityCell bistability_cell(double k, double alpha_scn,
                                 const ParameterSet& base,
                                 const MapOptions& map_opt = {});

/// Largest map jump at fixed k as a function of alpha, bisected for the
/// onset of map continuity (jump below `jump_tol`).
struct ContinuityOnset {
  double alpha_lo = 0.0;   // largest alpha scanned with jump >= tol
  double alpha_hi = 0.0;   // smallest alpha scanned with jump < tol
  double jump_lo = 0.0;
  double jump_hi = 0.0;
  bool monotone = true;    // jump non-increasing across the scan
  bool found = false;
};

ContinuityOnset map_continuity_onset(double alpha_min, double alpha_max,
                                     int n_scan, double k_ref, int order,
                                     double jump_tol, const ParameterSet& base,
                                     const MapOptions& map_opt = {},
                                     double alpha_tol = 5e-3);

/// Total k-measure of the exact rational plateaus of a staircase.
double plateau_measure(const Staircase& s);

/// Rotation number per (alpha, k) cell; rows ordered by alpha ascending
/// then k descending.
struct AtlasCell {
  double alpha_scn = 0.0;
  double k = 0.0;
  RotationResult rot;
};

std::vector<AtlasCell> rotation_atlas(const std::vector<double>& alphas,
                                      const std::vector<double>& ks_descending,
                                      const ParameterSet& base,
                                      const SimulateDays& sim, int jobs = 1,
                                      const RotationOptions& opt = {});

}  // namespace swff
