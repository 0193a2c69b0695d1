#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "swff/fastslow.hpp"
#include "swff/integrate.hpp"
#include "swff/params.hpp"

namespace swff {

/// One sampled graph point of the p-th return sleep-onset map. x and y are
/// the measured phases of the first and (1+order)-th onsets from the
/// constructed initial condition.
struct MapPoint {
  double phi_requested = 0.0;
  double x = 0.0;
  double y = 0.0;
  double t_first = 0.0;  // hours from the initial condition to the 1st onset
  bool manifold_ic = false;
  double offset_used = 0.0;
  int branch_id = -1;
};

struct Discontinuity {
  double x_left = 0.0;
  double x_right = 0.0;
  double y_left = 0.0;
  double y_right = 0.0;
  double jump = 0.0;  // circular |y_right - y_left|
  bool left_slope_infinite = false;
  bool right_slope_infinite = false;
};

struct SampledCircleMap {
  int order = 1;
  std::vector<MapPoint> points;  // sorted by x
  /// Maximal runs between discontinuities as (start index, length) over the
  /// cyclically ordered points; a run may wrap past the last index.
  std::vector<std::pair<int, int>> branches;
  std::vector<Discontinuity> discontinuities;

  /// Largest circular jump between cyclically adjacent samples.
  [[nodiscard]] double max_jump() const;
};

struct MapOptions {
  int base_grid = 512;
  int refine_rounds = 2;
  /// Jump-to-local-median ratio above which a gap is a discontinuity.
  double jump_ratio = 10.0;
  /// One-sided difference quotient above which a flank slope is infinite.
  double slope_cutoff = 1e3;
  /// Direct fold initial conditions must cross within this budget (hours)…
  double direct_budget = 6.0;
  /// …and land within this circular distance of the requested phase.
  double direct_dev_tol = 0.05;
  /// Crossing budget (hours) accepted for a committal displacement.
  double commit_budget = 0.3;
  double commit_offset_min = 1e-3;
  /// Hard cap on the whole-map integration per sample.
  double horizon_days = 40.0;
  int jobs = 1;
};

/// Builds p-th return sleep-onset map samples. Fold data at each circadian
/// phase is refined by Newton from a shared fold-curve cache (depends on the
/// response-width parameters only, so it is reused across k values).
class MapBuilder {
 public:
  MapBuilder(ParameterSet params, int order, MapOptions opt = {});

  /// Shares a previously built fold cache (must match the non-homeostatic
  /// parameters of `params`).
  MapBuilder(ParameterSet params, int order,
             std::shared_ptr<const FoldCurve> upper_fold, MapOptions opt = {});

  [[nodiscard]] const ParameterSet& params() const { return params_; }
  [[nodiscard]] int order() const { return order_; }
  [[nodiscard]] const MapOptions& options() const { return opt_; }
  [[nodiscard]] std::shared_ptr<const FoldCurve> fold_cache() const {
    return upper_;
  }

  /// One graph sample at a requested phase: a direct upper-fold initial
  /// condition when it crosses promptly near the requested phase, otherwise
  /// the smallest committal displacement along the near-zero eigenvector.
  [[nodiscard]] MapPoint sample(double phi) const;

  /// Initial condition used by sample(): the fold state at the phase,
  /// displaced by `offset` along the near-zero eigenvector.
  [[nodiscard]] StateVec initial_condition(double phi, double offset) const;

  /// Full map: base grid, adaptive refinement near large jumps, branch
  /// segmentation and discontinuity annotation.
  [[nodiscard]] SampledCircleMap build() const;

 private:
  struct FoldLocal {
    FoldPoint fold;
    FoldEigen eigen;
  };
  [[nodiscard]] FoldLocal fold_at_phase(double phi) const;

  ParameterSet params_;
  int order_;
  MapOptions opt_;
  std::shared_ptr<const FoldCurve> upper_;
};

/// Segments sorted samples into branches and discontinuities (exposed
/// separately so synthetic sample sets can be annotated in tests).
void annotate_map(SampledCircleMap& m, const MapOptions& opt = {});

struct MapFixedPoint {
  double phi = 0.0;
  double slope = 0.0;
  bool stable = false;
  /// Set when the local slope is indistinguishable from 1 (flagged, not
  /// classified).
  bool degenerate = false;
};

/// Diagonal crossings of the sampled map. When `builder` is given, each
/// crossing is refined by secant iteration with on-demand re-integration;
/// otherwise grid-level estimates are returned (synthetic maps).
std::vector<MapFixedPoint> find_fixed_points(const SampledCircleMap& m,
                                             const MapBuilder* builder,
                                             double tol = 1e-6);

enum class BifKind { SN, BC_S, BC_U, unresolved };

[[nodiscard]] std::string to_string(BifKind k);

struct BifurcationRecord {
  BifKind kind = BifKind::unresolved;
  double k = 0.0;
  double alpha_scn = 0.0;
  /// Phase of the colliding fixed point (or pair midpoint for SN).
  double phi = std::numeric_limits<double>::quiet_NaN();
  double slope = std::numeric_limits<double>::quiet_NaN();
  double pair_gap = std::numeric_limits<double>::quiet_NaN();
  double endpoint_distance = std::numeric_limits<double>::quiet_NaN();
  std::string evidence;
};

using MapFactory = std::function<SampledCircleMap(double k)>;
using FixedPointsFn =
    std::function<std::vector<MapFixedPoint>(double k, const SampledCircleMap&)>;

/// Locates and classifies every change of the fixed-point inventory across a
/// descending-k sequence of sampled maps. Additional maps are built through
/// `factory` to bisect each change to dk_tol; `fps` computes (refined) fixed
/// points for a map. Saddle-node: a stable/unstable pair collides interior
/// to a branch. Border collisions: a lone stable (BC_S) or unstable (BC_U)
/// fixed point reaches a branch endpoint.
std::vector<BifurcationRecord> classify_transition(
    std::vector<std::pair<double, SampledCircleMap>> seq,
    const MapFactory& factory, const FixedPointsFn& fps, double alpha_scn,
    double dk_tol = 1e-3);

struct TangencyWitness {
  double min_distance = std::numeric_limits<double>::infinity();
  double angle = 0.0;  // radians between velocity and curve tangent at argmin
  double c_at_min = 0.0;
  double h_at_min = 0.0;
  double t_at_min = 0.0;
};

/// Minimum distance (normalized (c, h) coordinates) between wake-segment
/// samples of a trajectory and the upper fold curve, with the approach
/// angle; requires a trajectory recorded with samples.
TangencyWitness tangency_witness(const Trajectory& tr, const FoldCurve& upper,
                                 const ParameterSet& p);

}  // namespace swff
