#pragma once

#include <array>
#include <vector>

#include "swff/model.hpp"
#include "swff/params.hpp"

namespace swff {

enum class Branch { lower, middle, upper };
enum class FoldSide { lower, upper };

[[nodiscard]] std::string to_string(Branch b);
[[nodiscard]] std::string to_string(FoldSide s);

/// Equilibrium of the fast subsystem (f_W, f_S, f_SCN) at frozen (h, c).
struct FastEquilibrium {
  double f_W = 0.0;
  double f_S = 0.0;
  double f_SCN = 0.0;
  double h = 0.0;
  double c = 0.0;
  bool stable = false;
  Branch branch = Branch::lower;
  /// Slope of the scalar self-map at the root; stable iff < 1.
  double g_prime = 0.0;
};

/// Saddle-node (fold) point of the fast subsystem at fixed c.
struct FoldPoint {
  double c = 0.0;
  double h = 0.0;
  double f_W = 0.0;
  double f_S = 0.0;
  FoldSide side = FoldSide::upper;
};

struct FoldPair {
  FoldPoint lower;
  FoldPoint upper;
};

/// Fold locations sampled over c in [-1, 1], sorted by c.
struct FoldCurve {
  FoldSide side = FoldSide::upper;
  std::vector<FoldPoint> samples;
};

/// The scalar self-map G whose fixed points are the fast-subsystem
/// equilibria in f_W (f_S and f_SCN eliminated at their steady states).
double scalar_self_map(double f_W, double h, double c, const ParameterSet& p);

/// dG/df_W (analytic).
double scalar_self_map_slope(double f_W, double h, double c,
                             const ParameterSet& p);

/// dG/dh (analytic).
double scalar_self_map_dh(double f_W, double h, double c,
                          const ParameterSet& p);

/// All fast-subsystem equilibria at (h, c), ordered by f_W. Root bracketing
/// uses `grid_n` uniform f_W points in [0, W_max]; every returned root has
/// |G(f_W) - f_W| < 1e-10.
std::vector<FastEquilibrium> fast_equilibria(double h, double c,
                                             const ParameterSet& p,
                                             int grid_n = 2000);

/// Eigenvalues of the fast-subsystem Jacobian at an equilibrium, ascending.
std::array<double, 3> fast_jacobian_eigenvalues(const FastEquilibrium& eq,
                                                const ParameterSet& p);

/// Both fold points at fixed c, found by bisection on the root count of
/// fast_equilibria and refined by a damped Newton solve of the
/// (fixed-point, unit-slope) system to 1e-10.
FoldPair fold_points(double c, const ParameterSet& p);

/// Newton refinement of a single fold from a warm start (used when marching
/// along c). Throws on divergence.
FoldPoint fold_refine(double c, double f_guess, double h_guess, FoldSide side,
                      const ParameterSet& p);

/// Fold curve over c in [-1, 1] from `n` base samples (n >= 16) plus
/// adaptive midpoint refinement wherever |dh_fold| between neighbors exceeds
/// 1% of (h_max - h_min).
FoldCurve sn_curve(FoldSide side, int n, const ParameterSet& p);

/// Linear interpolation of fold h at a given c.
double fold_h_at(const FoldCurve& curve, double c);

/// Unit eigenvector (f_W, f_S components) of the fast 2x2 Jacobian block for
/// the eigenvalue nearest zero at a fold, oriented toward decreasing f_W;
/// also returns that eigenvalue.
struct FoldEigen {
  double lambda = 0.0;
  std::array<double, 2> v{};  // (f_W, f_S) components, unit norm, v[0] < 0
};
FoldEigen fold_eigen(const FoldPoint& fold, const ParameterSet& p);

/// Full model state on the upper fold at the given circadian phase,
/// displaced by `offset` along the near-zero-eigenvalue eigenvector toward
/// decreasing f_W. offset = 0 gives exactly the fold equilibrium.
StateVec unstable_manifold_ic(double phase, double offset,
                              const ParameterSet& p);

/// Upper-fold full model state at a circadian phase (no displacement).
StateVec fold_state_at_phase(double phase, const ParameterSet& p);

struct ZSurfaceRow {
  double c = 0.0;
  double h = 0.0;
  double f_W = 0.0;
  Branch branch = Branch::lower;
};

/// Equilibrium sheet sampled on a rectangular (c, h) grid for plotting.
std::vector<ZSurfaceRow> zsurface_grid(int nc, int nh, const ParameterSet& p);

}  // namespace swff
