#include "swff/circlemap.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "swff/sweep.hpp"

namespace swff {

namespace {

constexpr double kMedianFloor = 1e-4;

double wrap01(double x) {
  double r = x - std::floor(x);
  return r >= 1.0 ? 0.0 : r;
}

/// Signed circular difference a - b wrapped into [-0.5, 0.5).
double circ_diff(double a, double b) {
  double d = wrap01(a - b);
  return d >= 0.5 ? d - 1.0 : d;
}

bool by_x(const MapPoint& a, const MapPoint& b) { return a.x < b.x; }

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid),
                   v.end());
  return v[mid];
}

}  // namespace

double SampledCircleMap::max_jump() const {
  const std::size_t n = points.size();
  if (n < 2) return 0.0;
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    m = std::max(m, phase_distance(points[i].y, points[(i + 1) % n].y));
  return m;
}

MapBuilder::MapBuilder(ParameterSet params, int order, MapOptions opt)
    : MapBuilder(std::move(params), order, nullptr, opt) {}

MapBuilder::MapBuilder(ParameterSet params, int order,
                       std::shared_ptr<const FoldCurve> upper_fold,
                       MapOptions opt)
    : params_(std::move(params)), order_(order), opt_(opt),
      upper_(std::move(upper_fold)) {
  if (order_ < 1) throw std::invalid_argument("map order must be positive");
  params_.validate();
  if (!upper_)
    upper_ = std::make_shared<const FoldCurve>(
        sn_curve(FoldSide::upper, 129, params_));
}

MapBuilder::FoldLocal MapBuilder::fold_at_phase(double phi) const {
  const double c = std::cos(theta_at_phase(phi));
  const auto& s = upper_->samples;
  double f_guess = s.front().f_W;
  double h_guess = s.front().h;
  const auto it = std::lower_bound(
      s.begin(), s.end(), c,
      [](const FoldPoint& fp, double cv) { return fp.c < cv; });
  if (it == s.end()) {
    f_guess = s.back().f_W;
    h_guess = s.back().h;
  } else if (it != s.begin()) {
    const FoldPoint& b = *it;
    const FoldPoint& a = *(it - 1);
    const double w = (c - a.c) / (b.c - a.c);
    f_guess = a.f_W + w * (b.f_W - a.f_W);
    h_guess = a.h + w * (b.h - a.h);
  }
  FoldLocal fl;
  fl.fold = fold_refine(c, f_guess, h_guess, FoldSide::upper, params_);
  fl.eigen = fold_eigen(fl.fold, params_);
  return fl;
}

StateVec MapBuilder::initial_condition(double phi, double offset) const {
  phi = wrap01(phi);
  const FoldLocal fl = fold_at_phase(phi);
  const double theta = theta_at_phase(phi);
  const double c = std::cos(theta);
  return StateVec{fl.fold.f_W + offset * fl.eigen.v[0],
                  fl.fold.f_S + offset * fl.eigen.v[1],
                  scn_drive(c, params_),
                  fl.fold.h,
                  c,
                  theta};
}

MapPoint MapBuilder::sample(double phi) const {
  phi = wrap01(phi);
  SwffSystem sys(params_);
  IntegrateOptions probe_opt;
  probe_opt.stop_after_sleep_onsets = 1;

  const StateVec direct = initial_condition(phi, 0.0);
  const Trajectory probe = integrate_system(
      sys, direct, sys.initial_regime(direct), 0.0, opt_.direct_budget,
      probe_opt);
  const auto probe_onsets = probe.events_of_kind(EventKind::sleep_onset);

  double offset = 0.0;
  bool manifold = false;
  if (probe_onsets.empty() ||
      phase_distance(probe_onsets.front().phase, phi) > opt_.direct_dev_tol) {
    // The direct fold release either rides the stable branch past the budget
    // or lands far from the requested phase. Search for the smallest
    // displacement along the near-zero eigenvector that commits to the
    // sleep transition promptly, so the sample is anchored where requested.
    const FoldLocal fl = fold_at_phase(phi);
    const double room = fl.fold.f_W - params_.theta_W - 0.05;
    const double s_max = room / -fl.eigen.v[0];
    const auto commits = [&](double s) {
      const StateVec ic = initial_condition(phi, s);
      const Trajectory tr = integrate_system(sys, ic, sys.initial_regime(ic),
                                             0.0, opt_.commit_budget,
                                             probe_opt);
      return tr.count_events(EventKind::sleep_onset) > 0;
    };
    if (s_max > opt_.commit_offset_min && commits(s_max)) {
      double lo = opt_.commit_offset_min;
      double hi = s_max;
      if (commits(lo)) {
        hi = lo;
      } else {
        for (int i = 0; i < 48 && hi - lo > 1e-9 * s_max; ++i) {
          const double mid = 0.5 * (lo + hi);
          (commits(mid) ? hi : lo) = mid;
        }
      }
      offset = hi;
      manifold = true;
    }
    // Otherwise nothing commits within budget: keep the direct release and
    // let the measured phase fall where it does.
  }

  IntegrateOptions run_opt;
  run_opt.stop_after_sleep_onsets = order_ + 1;
  const StateVec ic = initial_condition(phi, offset);
  const Trajectory tr = integrate_system(sys, ic, sys.initial_regime(ic), 0.0,
                                         opt_.horizon_days * 24.0, run_opt);
  const auto onsets = tr.events_of_kind(EventKind::sleep_onset);
  if (onsets.size() < static_cast<std::size_t>(order_) + 1)
    throw OdeError("map sample at phase " + std::to_string(phi) +
                   ": fewer than " + std::to_string(order_ + 1) +
                   " sleep onsets within the horizon");

  MapPoint pt;
  pt.phi_requested = phi;
  pt.x = onsets.front().phase;
  pt.y = onsets[static_cast<std::size_t>(order_)].phase;
  pt.t_first = onsets.front().t;
  pt.manifold_ic = manifold;
  pt.offset_used = offset;
  return pt;
}

SampledCircleMap MapBuilder::build() const {
  SampledCircleMap m;
  m.order = order_;
  std::vector<double> phases(static_cast<std::size_t>(opt_.base_grid));
  for (std::size_t i = 0; i < phases.size(); ++i)
    phases[i] = static_cast<double>(i) / opt_.base_grid;
  m.points.resize(phases.size());
  parallel_for(phases.size(), opt_.jobs,
               [&](std::size_t i) { m.points[i] = sample(phases[i]); });
  std::sort(m.points.begin(), m.points.end(), by_x);

  const double min_dx = 1.0 / (8.0 * opt_.base_grid);
  for (int round = 0; round < opt_.refine_rounds; ++round) {
    const std::size_t n = m.points.size();
    if (n < 8) break;
    std::vector<double> jump(n);
    for (std::size_t i = 0; i < n; ++i)
      jump[i] = phase_distance(m.points[i].y, m.points[(i + 1) % n].y);
    std::vector<double> inserts;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> window;
      for (int w = 1; w <= 8; ++w) {
        window.push_back(jump[(i + static_cast<std::size_t>(w)) % n]);
        window.push_back(jump[(i + n - static_cast<std::size_t>(w)) % n]);
      }
      const double med = std::max(median_of(std::move(window)), kMedianFloor);
      const double dx = wrap01(m.points[(i + 1) % n].x - m.points[i].x);
      if (jump[i] > opt_.jump_ratio * med && dx > min_dx)
        inserts.push_back(wrap01(m.points[i].x + 0.5 * dx));
    }
    if (inserts.empty()) break;
    std::vector<MapPoint> extra(inserts.size());
    parallel_for(inserts.size(), opt_.jobs,
                 [&](std::size_t i) { extra[i] = sample(inserts[i]); });
    m.points.insert(m.points.end(), extra.begin(), extra.end());
    std::sort(m.points.begin(), m.points.end(), by_x);
  }

  annotate_map(m, opt_);
  return m;
}

void annotate_map(SampledCircleMap& m, const MapOptions& opt) {
  auto& pts = m.points;
  std::sort(pts.begin(), pts.end(), by_x);
  m.discontinuities.clear();
  m.branches.clear();
  const std::size_t n = pts.size();
  if (n < 4) {
    if (n > 0) m.branches.emplace_back(0, static_cast<int>(n));
    for (auto& p : pts) p.branch_id = 0;
    return;
  }

  std::vector<double> jump(n);
  for (std::size_t i = 0; i < n; ++i)
    jump[i] = phase_distance(pts[i].y, pts[(i + 1) % n].y);

  std::vector<std::size_t> disc_idx;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> window;
    for (int w = 1; w <= 8; ++w) {
      window.push_back(jump[(i + static_cast<std::size_t>(w)) % n]);
      window.push_back(jump[(i + n - static_cast<std::size_t>(w)) % n]);
    }
    const double med = std::max(median_of(std::move(window)), kMedianFloor);
    if (jump[i] > opt.jump_ratio * med) disc_idx.push_back(i);
  }

  const auto quotient = [&](std::size_t a, std::size_t b) {
    // |dy/dx| between samples a and b (cyclic neighbours).
    const double dx = std::max(wrap01(pts[b].x - pts[a].x), 1e-15);
    return std::fabs(circ_diff(pts[b].y, pts[a].y)) / dx;
  };

  for (const std::size_t i : disc_idx) {
    const std::size_t j = (i + 1) % n;
    Discontinuity d;
    d.x_left = pts[i].x;
    d.y_left = pts[i].y;
    d.x_right = pts[j].x;
    d.y_right = pts[j].y;
    d.jump = jump[i];
    d.left_slope_infinite = quotient((i + n - 1) % n, i) > opt.slope_cutoff;
    d.right_slope_infinite = quotient(j, (j + 1) % n) > opt.slope_cutoff;
    m.discontinuities.push_back(d);
  }

  if (disc_idx.empty()) {
    m.branches.emplace_back(0, static_cast<int>(n));
    for (auto& p : pts) p.branch_id = 0;
    return;
  }
  for (std::size_t k = 0; k < disc_idx.size(); ++k) {
    const std::size_t a = disc_idx[k];
    const std::size_t b = disc_idx[(k + 1) % disc_idx.size()];
    const int start = static_cast<int>((a + 1) % n);
    const int len = static_cast<int>((b + n - a - 1) % n) + 1;
    m.branches.emplace_back(start, len);
  }
  for (std::size_t b = 0; b < m.branches.size(); ++b)
    for (int o = 0; o < m.branches[b].second; ++o)
      pts[(static_cast<std::size_t>(m.branches[b].first) +
           static_cast<std::size_t>(o)) %
          n]
          .branch_id = static_cast<int>(b);
}

std::string to_string(BifKind k) {
  switch (k) {
    case BifKind::SN: return "SN";
    case BifKind::BC_S: return "BC-S";
    case BifKind::BC_U: return "BC-U";
    case BifKind::unresolved: return "unresolved";
  }
  return "?";
}

namespace {

/// Two-sided difference-quotient slope around phi0, shrinking the stencil
/// when it spans a discontinuity; falls back to the supplied estimate.
double refine_slope(const MapBuilder& builder, double phi0, double fallback) {
  for (const double d : {1e-3, 2.5e-4, 6.25e-5}) {
    const MapPoint pp = builder.sample(wrap01(phi0 + d));
    const MapPoint pm = builder.sample(wrap01(phi0 - d));
    const double dx = circ_diff(pp.x, pm.x);
    const double dy = circ_diff(pp.y, pm.y);
    if (std::fabs(dx) < 1e-12) continue;
    if (std::fabs(dx) > 6.0 * d || std::fabs(dy) > 0.3) continue;
    return dy / dx;
  }
  return fallback;
}

MapFixedPoint make_fp(double phi, double slope) {
  MapFixedPoint fp;
  fp.phi = wrap01(phi);
  fp.slope = slope;
  fp.stable = std::fabs(slope) < 1.0;
  fp.degenerate = std::fabs(slope - 1.0) < 1e-3;
  return fp;
}

}  // namespace

std::vector<MapFixedPoint> find_fixed_points(const SampledCircleMap& m,
                                             const MapBuilder* builder,
                                             double tol) {
  const auto& pts = m.points;
  const std::size_t n = pts.size();
  std::vector<MapFixedPoint> out;
  if (n < 2) return out;

  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = circ_diff(pts[i].y, pts[i].x);

  const auto pair_slope = [&](std::size_t i, std::size_t j) {
    const double dx = wrap01(pts[j].x - pts[i].x);
    if (dx < 1e-15) return 1.0;
    return circ_diff(pts[j].y, pts[i].y) / dx;
  };

  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1) % n;

    if (std::fabs(d[i]) <= tol) {
      // The sample itself is a fixed point to tolerance.
      const std::size_t prev = (i + n - 1) % n;
      double slope = pair_slope(prev, j);
      if (builder) slope = refine_slope(*builder, pts[i].phi_requested, slope);
      out.push_back(make_fp(pts[i].x, slope));
      continue;
    }
    if (pts[i].branch_id != pts[j].branch_id) continue;
    if (std::fabs(d[j]) <= tol) continue;  // handled at j
    if (d[i] * d[j] >= 0.0) continue;

    const double grid_slope = pair_slope(i, j);
    if (!builder) {
      const double t = d[i] / (d[i] - d[j]);
      const double phi = wrap01(pts[i].x + t * wrap01(pts[j].x - pts[i].x));
      out.push_back(make_fp(phi, grid_slope));
      continue;
    }

    // Safeguarded secant on the requested phase, re-integrating on demand.
    const double base = pts[i].phi_requested;
    double qa = 0.0, ga = d[i];
    double qb = circ_diff(pts[j].phi_requested, base), gb = d[j];
    double qlo = std::min(qa, qb), qhi = std::max(qa, qb);
    double glo = qa < qb ? ga : gb;
    double best_q = std::fabs(ga) < std::fabs(gb) ? qa : qb;
    double best_g = std::min(std::fabs(ga), std::fabs(gb));
    double best_x = std::fabs(ga) < std::fabs(gb) ? pts[i].x : pts[j].x;
    for (int it = 0; it < 30 && best_g > tol; ++it) {
      double qc;
      if (std::fabs(gb - ga) > 1e-15) {
        qc = qb - gb * (qb - qa) / (gb - ga);
        if (!(qc > qlo && qc < qhi)) qc = 0.5 * (qlo + qhi);
      } else {
        qc = 0.5 * (qlo + qhi);
      }
      const MapPoint s = builder->sample(wrap01(base + qc));
      const double gc = circ_diff(s.y, s.x);
      if (std::fabs(gc) < best_g) {
        best_g = std::fabs(gc);
        best_q = qc;
        best_x = s.x;
      }
      if ((gc < 0.0) == (glo < 0.0)) {
        qlo = qc;
        glo = gc;
      } else {
        qhi = qc;
      }
      qa = qb;
      ga = gb;
      qb = qc;
      gb = gc;
    }
    if (best_g > 1e-4) continue;  // spurious crossing; no convergence
    const double slope =
        refine_slope(*builder, wrap01(base + best_q), grid_slope);
    out.push_back(make_fp(best_x, slope));
  }

  // Deduplicate crossings that refined to the same point.
  std::sort(out.begin(), out.end(),
            [](const MapFixedPoint& a, const MapFixedPoint& b) {
              return a.phi < b.phi;
            });
  std::vector<MapFixedPoint> dedup;
  for (const auto& fp : out) {
    if (!dedup.empty() && phase_distance(dedup.back().phi, fp.phi) < 5e-4 &&
        dedup.back().stable == fp.stable)
      continue;
    dedup.push_back(fp);
  }
  if (dedup.size() > 1 &&
      phase_distance(dedup.front().phi, dedup.back().phi) < 5e-4 &&
      dedup.front().stable == dedup.back().stable)
    dedup.pop_back();
  return dedup;
}

namespace {

struct InventoryNode {
  double k = 0.0;
  SampledCircleMap map;
  std::vector<MapFixedPoint> fps;
  int ns = 0;
  int nu = 0;
};

InventoryNode make_node(double k, SampledCircleMap map,
                        const FixedPointsFn& fps) {
  InventoryNode node;
  node.k = k;
  node.map = std::move(map);
  node.fps = fps(k, node.map);
  for (const auto& fp : node.fps) (fp.stable ? node.ns : node.nu)++;
  return node;
}

/// Fixed points on the richer side with no nearby same-stability partner on
/// the poorer side: the orbits involved in the bifurcation.
std::vector<MapFixedPoint> unmatched_fps(const std::vector<MapFixedPoint>& rich,
                                         const std::vector<MapFixedPoint>& poor,
                                         bool stable, int count) {
  std::vector<std::pair<double, MapFixedPoint>> scored;
  for (const auto& fp : rich) {
    if (fp.stable != stable) continue;
    double dmin = std::numeric_limits<double>::infinity();
    for (const auto& g : poor)
      if (g.stable == stable) dmin = std::min(dmin, phase_distance(fp.phi, g.phi));
    scored.emplace_back(dmin, fp);
  }
  std::sort(scored.begin(), scored.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<MapFixedPoint> out;
  for (int i = 0; i < count && i < static_cast<int>(scored.size()); ++i)
    out.push_back(scored[static_cast<std::size_t>(i)].second);
  return out;
}

double endpoint_distance(const SampledCircleMap& m, double phi) {
  double dmin = std::numeric_limits<double>::infinity();
  for (const auto& d : m.discontinuities) {
    dmin = std::min(dmin, phase_distance(phi, d.x_left));
    dmin = std::min(dmin, phase_distance(phi, d.x_right));
  }
  return dmin;
}

BifurcationRecord classify_event(const InventoryNode& hi,
                                 const InventoryNode& lo, double alpha_scn) {
  const int ds = lo.ns - hi.ns;
  const int du = lo.nu - hi.nu;
  const InventoryNode& rich = (hi.ns + hi.nu >= lo.ns + lo.nu) ? hi : lo;
  const InventoryNode& poor = (&rich == &hi) ? lo : hi;

  BifurcationRecord r;
  r.k = 0.5 * (hi.k + lo.k);
  r.alpha_scn = alpha_scn;
  std::ostringstream ev;
  ev << "stable " << hi.ns << "->" << lo.ns << ", unstable " << hi.nu << "->"
     << lo.nu << " across k=[" << lo.k << "," << hi.k << "]";

  if (ds != 0 && ds == du) {
    const auto ws = unmatched_fps(rich.fps, poor.fps, true, std::abs(ds));
    const auto wu = unmatched_fps(rich.fps, poor.fps, false, std::abs(du));
    double gap = std::numeric_limits<double>::infinity();
    const MapFixedPoint* bs = nullptr;
    const MapFixedPoint* bu = nullptr;
    for (const auto& s : ws)
      for (const auto& u : wu) {
        const double g = phase_distance(s.phi, u.phi);
        if (g < gap) {
          gap = g;
          bs = &s;
          bu = &u;
        }
      }
    if (bs && bu) {
      r.pair_gap = gap;
      r.phi = wrap01(bs->phi + 0.5 * circ_diff(bu->phi, bs->phi));
      r.slope = bs->slope;
      r.endpoint_distance = std::min(endpoint_distance(rich.map, bs->phi),
                                     endpoint_distance(rich.map, bu->phi));
      if (gap < 0.05 || gap < r.endpoint_distance) {
        r.kind = BifKind::SN;
        ev << "; stable/unstable pair gap " << gap << " at phi " << r.phi
           << ", stable slope " << bs->slope;
      } else {
        ev << "; pair gap " << gap << " not smaller than endpoint distance "
           << r.endpoint_distance;
      }
    } else {
      ev << "; colliding pair not identified";
    }
  } else if (ds == 0 && du != 0) {
    const auto wu = unmatched_fps(rich.fps, poor.fps, false, std::abs(du));
    for (const auto& u : wu) {
      const double dist = endpoint_distance(rich.map, u.phi);
      if (dist < r.endpoint_distance || !(r.endpoint_distance ==
                                          r.endpoint_distance)) {
        r.endpoint_distance = dist;
        r.phi = u.phi;
        r.slope = u.slope;
      }
    }
    if (!wu.empty() && r.endpoint_distance < 0.1) {
      r.kind = BifKind::BC_U;
      ev << "; unstable fp at phi " << r.phi << " within "
         << r.endpoint_distance << " of a branch endpoint, slope " << r.slope;
    } else {
      ev << "; lone unstable change but no fp near a branch endpoint";
    }
  } else if (du == 0 && ds != 0) {
    const auto ws = unmatched_fps(rich.fps, poor.fps, true, std::abs(ds));
    for (const auto& s : ws) {
      const double dist = endpoint_distance(rich.map, s.phi);
      if (dist < r.endpoint_distance || !(r.endpoint_distance ==
                                          r.endpoint_distance)) {
        r.endpoint_distance = dist;
        r.phi = s.phi;
        r.slope = s.slope;
      }
    }
    if (!ws.empty() && r.endpoint_distance < 0.1) {
      r.kind = BifKind::BC_S;
      ev << "; stable fp at phi " << r.phi << " within " << r.endpoint_distance
         << " of a branch endpoint, slope " << r.slope;
    } else {
      ev << "; lone stable change but no fp near a branch endpoint";
    }
  } else {
    ev << "; mixed inventory change, cannot attribute to a single event";
  }
  r.evidence = ev.str();
  return r;
}

}  // namespace

std::vector<BifurcationRecord> classify_transition(
    std::vector<std::pair<double, SampledCircleMap>> seq,
    const MapFactory& factory, const FixedPointsFn& fps, double alpha_scn,
    double dk_tol) {
  if (seq.size() < 2)
    throw std::invalid_argument("classify_transition needs at least two maps");
  for (std::size_t i = 1; i < seq.size(); ++i)
    if (!(seq[i].first < seq[i - 1].first))
      throw std::invalid_argument(
          "classify_transition expects strictly descending k");

  std::vector<InventoryNode> nodes;
  nodes.reserve(seq.size());
  for (auto& [k, map] : seq) nodes.push_back(make_node(k, std::move(map), fps));

  std::vector<BifurcationRecord> records;
  const std::function<void(const InventoryNode&, const InventoryNode&)> split =
      [&](const InventoryNode& a, const InventoryNode& b) {
        if (a.ns == b.ns && a.nu == b.nu) return;
        if (a.k - b.k <= dk_tol) {
          records.push_back(classify_event(a, b, alpha_scn));
          return;
        }
        const double km = 0.5 * (a.k + b.k);
        const InventoryNode mid = make_node(km, factory(km), fps);
        split(a, mid);
        split(mid, b);
      };
  for (std::size_t i = 1; i < nodes.size(); ++i) split(nodes[i - 1], nodes[i]);

  std::sort(records.begin(), records.end(),
            [](const BifurcationRecord& a, const BifurcationRecord& b) {
              return a.k > b.k;
            });
  return records;
}

TangencyWitness tangency_witness(const Trajectory& tr, const FoldCurve& upper,
                                 const ParameterSet& p) {
  if (tr.t.empty())
    throw std::invalid_argument(
        "tangency_witness needs a trajectory recorded with samples");
  if (upper.samples.size() < 2)
    throw std::invalid_argument("tangency_witness needs a sampled fold curve");

  const double h_span = p.h_max - p.h_min;
  struct P2 {
    double u, v;
  };
  std::vector<P2> curve;
  curve.reserve(upper.samples.size());
  for (const auto& s : upper.samples)
    curve.push_back({s.c / 2.0, s.h / h_span});

  double best2 = std::numeric_limits<double>::infinity();
  std::size_t arg_i = 0, arg_seg = 0;
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    if (!tr.regime[i].wake) continue;
    const P2 q{tr.y[i][iC] / 2.0, tr.y[i][iH] / h_span};
    for (std::size_t s = 0; s + 1 < curve.size(); ++s) {
      const double ex = curve[s + 1].u - curve[s].u;
      const double ey = curve[s + 1].v - curve[s].v;
      const double len2 = ex * ex + ey * ey;
      double t = 0.0;
      if (len2 > 0.0)
        t = std::clamp(
            ((q.u - curve[s].u) * ex + (q.v - curve[s].v) * ey) / len2, 0.0,
            1.0);
      const double dx = q.u - (curve[s].u + t * ex);
      const double dy = q.v - (curve[s].v + t * ey);
      const double d2 = dx * dx + dy * dy;
      if (d2 < best2) {
        best2 = d2;
        arg_i = i;
        arg_seg = s;
      }
    }
  }

  TangencyWitness w;
  if (!std::isfinite(best2)) return w;  // no wake samples
  w.min_distance = std::sqrt(best2);
  w.c_at_min = tr.y[arg_i][iC];
  w.h_at_min = tr.y[arg_i][iH];
  w.t_at_min = tr.t[arg_i];

  const double ex = curve[arg_seg + 1].u - curve[arg_seg].u;
  const double ey = curve[arg_seg + 1].v - curve[arg_seg].v;
  StateVec dy{};
  vector_field(tr.y[arg_i], tr.regime[arg_i], p, dy);
  const double vu = dy[iC] / 2.0;
  const double vv = dy[iH] / h_span;
  const double nt = std::hypot(ex, ey);
  const double nv = std::hypot(vu, vv);
  if (nt > 0.0 && nv > 0.0) {
    const double cosang = std::fabs(ex * vu + ey * vv) / (nt * nv);
    w.angle = std::acos(std::clamp(cosang, 0.0, 1.0));
  }
  return w;
}

}  // namespace swff
