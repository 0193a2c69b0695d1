#include "swff/atlas.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "swff/sweep.hpp"

namespace swff {

namespace {

constexpr double kTongueFloor = 0.02;  // smallest k probed for an edge

bool locked(const RotationResult& r, int q, int p) {
  return r.exact && r.p == p && r.q == q;
}

}  // namespace

TongueRow locate_tongue(int q, int p, double alpha_scn, double k_seed,
                        const ParameterSet& base, const SimulateDays& sim,
                        double dk_tol, double scan_halfwidth,
                        double scan_step) {
  ParameterSet ps = base;
  ps.alpha_SCN = alpha_scn;
  const auto rot_at = [&](double k) {
    ParameterSet pk = ps;
    pk.k = k;
    return rotation_number(pk, sim);
  };
  const auto locked_at = [&](double k) { return locked(rot_at(k), q, p); };

  TongueRow row;
  row.alpha_scn = alpha_scn;

  // Find one locked k near the seed.
  double k_in = std::numeric_limits<double>::quiet_NaN();
  for (double off = 0.0; off <= scan_halfwidth + 1e-12; off += scan_step) {
    for (const double k : {k_seed + off, k_seed - off}) {
      if (k <= kTongueFloor || k > 1.0) continue;
      if (locked_at(k)) {
        k_in = k;
        break;
      }
      if (off == 0.0) break;  // the two candidates coincide
    }
    if (k_in == k_in) break;
  }
  if (!(k_in == k_in)) return row;

  // Expand then bisect the upper edge.
  double hi = k_in;
  while (hi < 1.0) {
    double probe = std::min(1.0, hi + 4.0 * scan_step);
    if (locked_at(probe)) {
      hi = probe;
      continue;
    }
    while (probe - hi > dk_tol) {
      const double mid = 0.5 * (probe + hi);
      (locked_at(mid) ? hi : probe) = mid;
    }
    hi = 0.5 * (hi + probe);
    break;
  }
  row.k_hi = hi;

  // Expand then bisect the lower edge.
  double lo = k_in;
  while (lo > kTongueFloor) {
    double probe = std::max(kTongueFloor, lo - 4.0 * scan_step);
    if (locked_at(probe)) {
      lo = probe;
      continue;
    }
    while (lo - probe > dk_tol) {
      const double mid = 0.5 * (probe + lo);
      (locked_at(mid) ? lo : probe) = mid;
    }
    lo = 0.5 * (lo + probe);
    break;
  }
  row.k_lo = lo;
  row.found = true;
  return row;
}

std::vector<TongueRow> tongue_rows(int q, int p,
                                   const std::vector<double>& alphas,
                                   double k_seed, const ParameterSet& base,
                                   const SimulateDays& sim, double dk_tol) {
  std::vector<TongueRow> rows;
  double seed = k_seed;
  for (const double a : alphas) {
    TongueRow row = locate_tongue(q, p, a, seed, base, sim, dk_tol);
    if (row.found) seed = 0.5 * (row.k_lo + row.k_hi);
    rows.push_back(row);
  }
  return rows;
}

std::vector<BifurcationRecord> map_events_in_range(
    int order, double alpha_scn, double k_hi, double k_lo, int n_nodes,
    const ParameterSet& base, const MapOptions& map_opt, double dk_tol) {
  if (!(k_hi > k_lo))
    throw std::invalid_argument("map_events_in_range needs k_hi > k_lo");
  if (n_nodes < 2) throw std::invalid_argument("need at least two seed nodes");

  ParameterSet ps = base;
  ps.alpha_SCN = alpha_scn;
  ps.validate();
  const auto cache = std::make_shared<const FoldCurve>(
      sn_curve(FoldSide::upper, 129, ps));

  const auto with_k = [&](double k) {
    ParameterSet pk = ps;
    pk.k = k;
    return pk;
  };
  const MapFactory factory = [&, cache](double k) {
    return MapBuilder(with_k(k), order, cache, map_opt).build();
  };
  const FixedPointsFn fps = [&, cache](double k, const SampledCircleMap& m) {
    const MapBuilder b(with_k(k), order, cache, map_opt);
    return find_fixed_points(m, &b);
  };

  std::vector<std::pair<double, SampledCircleMap>> seq;
  for (int i = 0; i < n_nodes; ++i) {
    const double k =
        k_hi + (k_lo - k_hi) * static_cast<double>(i) / (n_nodes - 1);
    seq.emplace_back(k, factory(k));
  }
  return classify_transition(std::move(seq), factory, fps, alpha_scn, dk_tol);
}

TongueTransition tongue_transition(int q, int p, double alpha_scn,
                                   double k_seed, const ParameterSet& base,
                                   const SimulateDays& sim,
                                   const MapOptions& map_opt, double pad,
                                   double dk_tol) {
  TongueTransition out;
  out.alpha_scn = alpha_scn;
  out.edges = locate_tongue(q, p, alpha_scn, k_seed, base, sim, dk_tol);
  if (!out.edges.found) return out;

  const double k_hi = std::min(1.0, out.edges.k_hi + pad);
  const double k_lo = std::max(kTongueFloor, out.edges.k_lo - pad);
  out.records =
      map_events_in_range(p, alpha_scn, k_hi, k_lo, 7, base, map_opt, dk_tol);
  std::vector<BifKind> kinds;
  kinds.reserve(out.records.size());
  for (const auto& r : out.records) kinds.push_back(r.kind);
  out.grammar_ok = sequence_in_grammar(kinds);
  return out;
}

bool sequence_in_grammar(const std::vector<BifKind>& seq) {
  using K = BifKind;
  static const std::vector<std::vector<K>> kCatalogue = {
      {K::BC_U, K::SN},
      {K::BC_S},
      {K::SN, K::BC_U, K::BC_S},
      {K::SN, K::SN},
      {K::SN, K::BC_U, K::BC_U, K::SN},
      {K::SN, K::BC_U, K::SN, K::SN, K::BC_S},
      {K::SN, K::BC_U, K::SN, K::BC_S, K::SN},
      {K::SN, K::BC_U, K::SN, K::BC_S, K::BC_U, K::SN},
  };
  return std::any_of(kCatalogue.begin(), kCatalogue.end(),
                     [&](const std::vector<K>& c) { return c == seq; });
}

BistabilityCell bistability_cell(double k, double alpha_scn,
                                 const ParameterSet& base,
                                 const MapOptions& map_opt) {
  BistabilityCell cell;
  cell.k = k;
  cell.alpha_scn = alpha_scn;

  ParameterSet ps = base;
  ps.k = k;
  ps.alpha_SCN = alpha_scn;
  ps.validate();

  const MapBuilder b2(ps, 2, map_opt);
  const SampledCircleMap m2 = b2.build();
  const auto fps = find_fixed_points(m2, &b2);
  std::vector<MapFixedPoint> stable;
  for (const auto& fp : fps)
    if (fp.stable && !fp.degenerate) stable.push_back(fp);
  if (stable.empty()) return cell;

  // Group period-2 partners into families via the first-return image.
  const MapBuilder b1(ps, 1, b2.fold_cache(), map_opt);
  std::vector<int> family(stable.size(), -1);
  int n_families = 0;
  for (std::size_t i = 0; i < stable.size(); ++i) {
    if (family[i] >= 0) continue;
    family[i] = n_families;
    cell.family_phi.push_back(stable[i].phi);
    const double image = b1.sample(stable[i].phi).y;
    std::size_t partner = i;
    double dmin = 0.02;
    for (std::size_t j = 0; j < stable.size(); ++j) {
      if (family[j] >= 0) continue;
      const double d = phase_distance(stable[j].phi, image);
      if (d < dmin) {
        dmin = d;
        partner = j;
      }
    }
    if (partner != i) family[partner] = n_families;
    ++n_families;
  }
  cell.n_stable_families = n_families;
  cell.bistable = n_families >= 2;
  if (!cell.bistable) return cell;

  // Confirm distinct attractors: integrate long from each family and
  // compare the asymptotic onset-phase sets.
  std::vector<std::vector<double>> orbit_phases;
  for (const double phi : cell.family_phi) {
    const MapPoint sp = b2.sample(phi);
    const StateVec ic = b2.initial_condition(phi, sp.offset_used);
    const Trajectory tr = simulate(ps, ic, 0.0, 60.0 * 24.0);
    const auto onsets = tr.events_of_kind(EventKind::sleep_onset);
    std::vector<double> tail;
    const std::size_t take = std::min<std::size_t>(12, onsets.size());
    for (std::size_t i = onsets.size() - take; i < onsets.size(); ++i)
      tail.push_back(onsets[i].phase);
    // Cluster into distinct phases.
    std::sort(tail.begin(), tail.end());
    std::vector<double> distinct;
    for (const double ph : tail) {
      bool merged = false;
      for (const double d : distinct)
        if (phase_distance(ph, d) < 0.02) {
          merged = true;
          break;
        }
      if (!merged) distinct.push_back(ph);
    }
    orbit_phases.push_back(std::move(distinct));
  }
  cell.basin_confirmed = true;
  for (std::size_t a = 0; a + 1 < orbit_phases.size() && cell.basin_confirmed;
       ++a)
    for (std::size_t b = a + 1; b < orbit_phases.size(); ++b) {
      // Two orbits are the same attractor when every phase of one matches a
      // phase of the other.
      const auto& A = orbit_phases[a];
      const auto& B = orbit_phases[b];
      bool same = A.size() == B.size();
      if (same)
        for (const double pa : A) {
          bool hit = false;
          for (const double pb : B)
            if (phase_distance(pa, pb) < 0.03) hit = true;
          if (!hit) {
            same = false;
            break;
          }
        }
      if (same) {
        cell.basin_confirmed = false;
        break;
      }
    }
  return cell;
}

ContinuityOnset map_continuity_onset(double alpha_min, double alpha_max,
                                     int n_scan, double k_ref, int order,
                                     double jump_tol, const ParameterSet& base,
                                     const MapOptions& map_opt,
                                     double alpha_tol) {
  if (n_scan < 2) throw std::invalid_argument("need at least two scan nodes");
  const auto jump_at = [&](double alpha) {
    ParameterSet pa = base;
    pa.alpha_SCN = alpha;
    pa.k = k_ref;
    return MapBuilder(pa, order, map_opt).build().max_jump();
  };

  std::vector<double> alphas(static_cast<std::size_t>(n_scan));
  std::vector<double> jumps(static_cast<std::size_t>(n_scan));
  for (int i = 0; i < n_scan; ++i) {
    alphas[static_cast<std::size_t>(i)] =
        alpha_min + (alpha_max - alpha_min) * i / (n_scan - 1);
    jumps[static_cast<std::size_t>(i)] =
        jump_at(alphas[static_cast<std::size_t>(i)]);
  }

  ContinuityOnset out;
  out.monotone = true;
  for (std::size_t i = 0; i + 1 < jumps.size(); ++i)
    if (jumps[i + 1] > jumps[i] + 0.02) out.monotone = false;

  for (std::size_t i = 0; i + 1 < jumps.size(); ++i) {
    if (!(jumps[i] >= jump_tol && jumps[i + 1] < jump_tol)) continue;
    double lo = alphas[i], hi = alphas[i + 1];
    double jlo = jumps[i], jhi = jumps[i + 1];
    while (hi - lo > alpha_tol) {
      const double mid = 0.5 * (lo + hi);
      const double jm = jump_at(mid);
      if (jm >= jump_tol) {
        lo = mid;
        jlo = jm;
      } else {
        hi = mid;
        jhi = jm;
      }
    }
    out.alpha_lo = lo;
    out.alpha_hi = hi;
    out.jump_lo = jlo;
    out.jump_hi = jhi;
    out.found = true;
    return out;
  }
  out.alpha_lo = alphas.front();
  out.alpha_hi = alphas.back();
  out.jump_lo = jumps.front();
  out.jump_hi = jumps.back();
  return out;
}

double plateau_measure(const Staircase& s) {
  double total = 0.0;
  for (const auto& pl : s.plateaus) total += std::max(0.0, pl.k_hi - pl.k_lo);
  return total;
}

std::vector<AtlasCell> rotation_atlas(const std::vector<double>& alphas,
                                      const std::vector<double>& ks_descending,
                                      const ParameterSet& base,
                                      const SimulateDays& sim, int jobs,
                                      const RotationOptions& opt) {
  const std::size_t na = alphas.size();
  const std::size_t nk = ks_descending.size();
  std::vector<AtlasCell> cells(na * nk);
  parallel_for(na * nk, jobs, [&](std::size_t idx) {
    const std::size_t ia = idx / nk;
    const std::size_t ik = idx % nk;
    ParameterSet pc = base;
    pc.alpha_SCN = alphas[ia];
    pc.k = ks_descending[ik];
    AtlasCell& cell = cells[idx];
    cell.alpha_scn = pc.alpha_SCN;
    cell.k = pc.k;
    cell.rot = rotation_number(pc, sim, opt);
  });
  return cells;
}

}  // namespace swff
