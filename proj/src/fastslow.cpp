#include "swff/fastslow.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace swff {

std::string to_string(Branch b) {
  switch (b) {
    case Branch::lower: return "lower";
    case Branch::middle: return "middle";
    case Branch::upper: return "upper";
  }
  return "unknown";
}

std::string to_string(FoldSide s) {
  return s == FoldSide::lower ? "lower" : "upper";
}

namespace {

struct Inputs {
  double x_W;  // synaptic input to the wake population
  double x_S;  // synaptic input to the sleep population
};

Inputs equilibrium_inputs(double f_W, double c, const ParameterSet& p,
                          double h) {
  const double scn = scn_drive(c, p);
  const double x_S = -p.g_ws * f_W - p.g_scns * scn;
  const double f_S = sleep_drive(x_S, h, p);
  const double x_W = p.g_scnw * scn - p.g_sw * f_S;
  return {x_W, x_S};
}

}  // namespace

double scalar_self_map(double f_W, double h, double c, const ParameterSet& p) {
  const Inputs in = equilibrium_inputs(f_W, c, p, h);
  return wake_drive(in.x_W, p);
}

double scalar_self_map_slope(double f_W, double h, double c,
                             const ParameterSet& p) {
  const Inputs in = equilibrium_inputs(f_W, c, p, h);
  return p.g_sw * p.g_ws * wake_drive_dx(in.x_W, p) *
         sleep_drive_dx(in.x_S, h, p);
}

double scalar_self_map_dh(double f_W, double h, double c,
                          const ParameterSet& p) {
  const Inputs in = equilibrium_inputs(f_W, c, p, h);
  return p.g_sw * p.k2 * wake_drive_dx(in.x_W, p) *
         sleep_drive_dx(in.x_S, h, p);
}

std::array<double, 3> fast_jacobian_eigenvalues(const FastEquilibrium& eq,
                                                const ParameterSet& p) {
  const Inputs in = equilibrium_inputs(eq.f_W, eq.c, p, eq.h);
  const double a11 = -1.0 / p.tau_W;
  const double a22 = -1.0 / p.tau_S;
  const double a12 = -p.g_sw * wake_drive_dx(in.x_W, p) / p.tau_W;
  const double a21 = -p.g_ws * sleep_drive_dx(in.x_S, eq.h, p) / p.tau_S;
  const double mid = 0.5 * (a11 + a22);
  const double rad = std::sqrt(0.25 * (a11 - a22) * (a11 - a22) + a12 * a21);
  std::array<double, 3> eig{mid - rad, mid + rad, -1.0 / p.tau_SCN};
  std::sort(eig.begin(), eig.end());
  return eig;
}

std::vector<FastEquilibrium> fast_equilibria(double h, double c,
                                             const ParameterSet& p,
                                             int grid_n) {
  auto residual = [&](double f) { return scalar_self_map(f, h, c, p) - f; };
  std::vector<double> roots;
  double f_prev = 0.0;
  double r_prev = residual(f_prev);
  for (int i = 1; i < grid_n; ++i) {
    const double f = p.W_max * double(i) / double(grid_n - 1);
    const double r = residual(f);
    if (r_prev == 0.0) {
      roots.push_back(f_prev);
    } else if ((r_prev > 0.0) != (r > 0.0)) {
      double lo = f_prev, hi = f;
      double r_lo = r_prev;
      while (hi - lo > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        const double rm = residual(mid);
        if (rm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((rm > 0.0) == (r_lo > 0.0)) {
          lo = mid;
          r_lo = rm;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    f_prev = f;
    r_prev = r;
  }
  if (r_prev == 0.0) roots.push_back(f_prev);

  std::vector<FastEquilibrium> out;
  out.reserve(roots.size());
  const double scn = scn_drive(c, p);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    FastEquilibrium eq;
    eq.f_W = roots[i];
    eq.c = c;
    eq.h = h;
    eq.f_SCN = scn;
    eq.f_S = sleep_drive(-p.g_ws * eq.f_W - p.g_scns * scn, h, p);
    eq.g_prime = scalar_self_map_slope(eq.f_W, h, c, p);
    const auto eig = fast_jacobian_eigenvalues(eq, p);
    eq.stable = eig[2] < 0.0;
    if (roots.size() == 3) {
      eq.branch = i == 0 ? Branch::lower
                         : (i == 1 ? Branch::middle : Branch::upper);
    } else if (roots.size() == 2) {
      eq.branch = i == 0 ? Branch::lower : Branch::upper;
    } else {
      eq.branch = eq.f_W >= p.theta_W ? Branch::upper : Branch::lower;
    }
    out.push_back(eq);
  }
  return out;
}

namespace {

constexpr double kFoldTol = 1e-10;

// Snapped to {1, 3}: a count of exactly 2 can only be a grazed tangency at
// scan resolution and belongs with the three-root side.
int root_count(double h, double c, const ParameterSet& p) {
  return fast_equilibria(h, c, p, 400).size() >= 2 ? 3 : 1;
}

FoldPoint finish_fold(double c, double f, double h, FoldSide side,
                      const ParameterSet& p) {
  FoldPoint out;
  out.c = c;
  out.h = h;
  out.f_W = f;
  out.f_S = sleep_drive(-p.g_ws * f - p.g_scns * scn_drive(c, p), h, p);
  out.side = side;
  return out;
}

}  // namespace

FoldPoint fold_refine(double c, double f_guess, double h_guess, FoldSide side,
                      const ParameterSet& p) {
  double f = f_guess, h = h_guess;
  auto F1 = [&](double ff, double hh) {
    return scalar_self_map(ff, hh, c, p) - ff;
  };
  auto F2 = [&](double ff, double hh) {
    return scalar_self_map_slope(ff, hh, c, p) - 1.0;
  };
  double r1 = F1(f, h), r2 = F2(f, h);
  double norm = std::fabs(r1) + std::fabs(r2);
  for (int it = 0; it < 80; ++it) {
    if (std::fabs(r1) < kFoldTol && std::fabs(r2) < kFoldTol)
      return finish_fold(c, f, h, side, p);
    const double j11 = scalar_self_map_slope(f, h, c, p) - 1.0;
    const double j12 = scalar_self_map_dh(f, h, c, p);
    const double ef = 1e-6 * std::max(1.0, std::fabs(f));
    const double eh = 1e-6 * std::max(1.0, std::fabs(h));
    const double j21 = (F2(f + ef, h) - F2(f - ef, h)) / (2.0 * ef);
    const double j22 = (F2(f, h + eh) - F2(f, h - eh)) / (2.0 * eh);
    const double det = j11 * j22 - j12 * j21;
    if (det == 0.0 || !std::isfinite(det))
      throw std::runtime_error("fold refinement: singular Jacobian");
    const double df = (-r1 * j22 + r2 * j12) / det;
    const double dh = (-j11 * r2 + j21 * r1) / det;
    double lam = 1.0;
    for (; lam >= 1.0 / 64; lam *= 0.5) {
      const double fn = std::clamp(f + lam * df, 0.0, p.W_max);
      const double hn = h + lam * dh;
      const double n1 = F1(fn, hn), n2 = F2(fn, hn);
      if (std::fabs(n1) + std::fabs(n2) < norm || lam <= 1.0 / 64) {
        f = fn;
        h = hn;
        r1 = n1;
        r2 = n2;
        norm = std::fabs(n1) + std::fabs(n2);
        break;
      }
    }
  }
  throw std::runtime_error("fold refinement did not converge");
}

FoldPair fold_points(double c, const ParameterSet& p) {
  const int kScan = 400;
  std::vector<std::pair<double, int>> counts;
  counts.reserve(kScan);
  for (int i = 0; i < kScan; ++i) {
    const double h =
        p.h_min + (p.h_max - p.h_min) * double(i) / double(kScan - 1);
    counts.emplace_back(h, root_count(h, c, p));
  }
  std::vector<std::pair<double, double>> brackets;  // (h_3roots, h_1root)
  for (int i = 0; i + 1 < kScan; ++i) {
    if (counts[i].second != counts[i + 1].second) {
      const bool three_first = counts[i].second == 3;
      brackets.emplace_back(
          three_first ? counts[i].first : counts[i + 1].first,
          three_first ? counts[i + 1].first : counts[i].first);
    }
  }
  if (brackets.size() != 2)
    throw std::runtime_error("fold scan: expected exactly two fold points");

  FoldPair out;
  for (std::size_t t = 0; t < 2; ++t) {
    double h3 = brackets[t].first, h1 = brackets[t].second;
    for (int it = 0; it < 48 && std::fabs(h1 - h3) > 1e-8; ++it) {
      const double hm = 0.5 * (h3 + h1);
      (root_count(hm, c, p) == 3 ? h3 : h1) = hm;
    }
    const auto roots = fast_equilibria(h3, c, p, 2000);
    if (roots.size() != 3)
      throw std::runtime_error("fold scan: lost bracket during bisection");
    const bool is_lower = t == 0;  // first transition in h is the lower fold
    const double f_start = is_lower ? 0.5 * (roots[0].f_W + roots[1].f_W)
                                    : 0.5 * (roots[1].f_W + roots[2].f_W);
    const FoldSide side = is_lower ? FoldSide::lower : FoldSide::upper;
    const FoldPoint fp =
        fold_refine(c, f_start, 0.5 * (h3 + h1), side, p);
    (is_lower ? out.lower : out.upper) = fp;
  }
  if (!(out.lower.h < out.upper.h))
    throw std::runtime_error("fold scan: fold ordering violated");
  return out;
}

FoldCurve sn_curve(FoldSide side, int n, const ParameterSet& p) {
  if (n < 16) throw std::invalid_argument("sn_curve: need n >= 16");
  FoldCurve curve;
  curve.side = side;
  auto solve_at = [&](double c, const FoldPoint* warm) -> FoldPoint {
    if (warm) {
      try {
        return fold_refine(c, warm->f_W, warm->h, side, p);
      } catch (const std::runtime_error&) {
        // fall through to the full scan
      }
    }
    const FoldPair pair = fold_points(c, p);
    return side == FoldSide::lower ? pair.lower : pair.upper;
  };

  const FoldPoint* prev = nullptr;
  for (int i = 0; i < n; ++i) {
    const double c = -1.0 + 2.0 * double(i) / double(n - 1);
    curve.samples.push_back(solve_at(c, prev));
    prev = &curve.samples.back();
  }

  const double jump_limit = 0.01 * (p.h_max - p.h_min);
  for (int round = 0; round < 8; ++round) {
    std::vector<FoldPoint> inserted;
    for (std::size_t i = 0; i + 1 < curve.samples.size(); ++i) {
      const FoldPoint& a = curve.samples[i];
      const FoldPoint& b = curve.samples[i + 1];
      if (std::fabs(b.h - a.h) > jump_limit && b.c - a.c > 1e-4)
        inserted.push_back(solve_at(0.5 * (a.c + b.c), &a));
    }
    if (inserted.empty()) break;
    curve.samples.insert(curve.samples.end(), inserted.begin(),
                         inserted.end());
    std::sort(curve.samples.begin(), curve.samples.end(),
              [](const FoldPoint& x, const FoldPoint& y) { return x.c < y.c; });
  }
  return curve;
}

double fold_h_at(const FoldCurve& curve, double c) {
  const auto& s = curve.samples;
  if (s.empty()) throw std::invalid_argument("fold_h_at: empty curve");
  if (c <= s.front().c) return s.front().h;
  if (c >= s.back().c) return s.back().h;
  auto it = std::upper_bound(
      s.begin(), s.end(), c,
      [](double value, const FoldPoint& fp) { return value < fp.c; });
  const FoldPoint& b = *it;
  const FoldPoint& a = *(it - 1);
  const double w = (c - a.c) / (b.c - a.c);
  return a.h + w * (b.h - a.h);
}

FoldEigen fold_eigen(const FoldPoint& fold, const ParameterSet& p) {
  FastEquilibrium eq;
  eq.f_W = fold.f_W;
  eq.f_S = fold.f_S;
  eq.h = fold.h;
  eq.c = fold.c;
  const Inputs in = equilibrium_inputs(fold.f_W, fold.c, p, fold.h);
  const double a11 = -1.0 / p.tau_W;
  const double a22 = -1.0 / p.tau_S;
  const double a12 = -p.g_sw * wake_drive_dx(in.x_W, p) / p.tau_W;
  const double a21 = -p.g_ws * sleep_drive_dx(in.x_S, fold.h, p) / p.tau_S;
  const double mid = 0.5 * (a11 + a22);
  const double rad = std::sqrt(0.25 * (a11 - a22) * (a11 - a22) + a12 * a21);
  FoldEigen out;
  out.lambda = mid + rad;  // the eigenvalue nearest zero at a fold
  double v0 = a12;
  double v1 = out.lambda - a11;
  const double nrm = std::hypot(v0, v1);
  if (nrm == 0.0)
    throw std::runtime_error("fold eigenvector: degenerate fold");
  v0 /= nrm;
  v1 /= nrm;
  if (v0 > 0.0) {
    v0 = -v0;
    v1 = -v1;
  }
  out.v = {v0, v1};
  return out;
}

StateVec fold_state_at_phase(double phase, const ParameterSet& p) {
  return unstable_manifold_ic(phase, 0.0, p);
}

StateVec unstable_manifold_ic(double phase, double offset,
                              const ParameterSet& p) {
  const double theta = theta_at_phase(phase);
  const double c = std::cos(theta);
  const FoldPair pair = fold_points(c, p);
  const FoldPoint& fold = pair.upper;
  const FoldEigen eig = fold_eigen(fold, p);
  StateVec y{};
  y[iFW] = fold.f_W + offset * eig.v[0];
  y[iFS] = fold.f_S + offset * eig.v[1];
  y[iFSCN] = scn_drive(c, p);
  y[iH] = fold.h;
  y[iC] = c;
  y[iTheta] = theta;
  return y;
}

std::vector<ZSurfaceRow> zsurface_grid(int nc, int nh, const ParameterSet& p) {
  if (nc < 2 || nh < 2)
    throw std::invalid_argument("zsurface_grid: need nc, nh >= 2");
  std::vector<ZSurfaceRow> rows;
  for (int i = 0; i < nc; ++i) {
    const double c = -1.0 + 2.0 * double(i) / double(nc - 1);
    for (int j = 0; j < nh; ++j) {
      const double h =
          p.h_min + (p.h_max - p.h_min) * double(j) / double(nh - 1);
      for (const auto& eq : fast_equilibria(h, c, p, 400))
        rows.push_back({c, h, eq.f_W, eq.branch});
    }
  }
  return rows;
}

}  // namespace swff
