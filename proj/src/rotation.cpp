#include "swff/rotation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "swff/sweep.hpp"

namespace swff {

OnsetSeries onset_series(const Trajectory& tr) {
  OnsetSeries s;
  for (const auto& e : tr.events) {
    if (e.kind == EventKind::sleep_onset) {
      s.t.push_back(e.t);
      s.phase.push_back(e.phase);
    } else if (e.kind == EventKind::circadian_minimum) {
      s.minima_t.push_back(e.t);
    }
  }
  return s;
}

RotationResult detect_rotation(const OnsetSeries& s,
                               const RotationOptions& opt) {
  const auto n = static_cast<long>(s.t.size());
  if (n < 3) return {};
  auto minima_between = [&](double t_lo, double t_hi) {
    // half-open [t_lo, t_hi)
    const auto lo = std::lower_bound(s.minima_t.begin(), s.minima_t.end(), t_lo);
    const auto hi = std::lower_bound(s.minima_t.begin(), s.minima_t.end(), t_hi);
    return static_cast<long>(hi - lo);
  };
  const long last = n - 1;
  const double last_phase = s.phase[last];
  for (long j = last - 1; j >= 0; --j) {
    if (phase_distance(s.phase[j], last_phase) >= opt.tol) continue;
    const long period = last - j;
    bool confirmed = true;
    for (int m = 2; m <= 1 + opt.confirm_periods; ++m) {
      const long idx = last - m * period;
      if (idx < 0 || phase_distance(s.phase[idx], last_phase) >= opt.tol) {
        confirmed = false;
        break;
      }
    }
    if (!confirmed) continue;
    RotationResult out;
    const long q = minima_between(s.t[j], s.t[last]);
    if (q <= 0) continue;
    const long g = std::gcd(period, q);
    out.p = period / g;
    out.q = q / g;
    out.rho = double(out.q) / double(out.p);
    out.exact = true;
    return out;
  }
  return {};
}

RotationResult rotation_number(const ParameterSet& p, const SimulateDays& sim,
                               const RotationOptions& opt) {
  Trajectory tr = sim(p, opt.days);
  OnsetSeries s = onset_series(tr);
  if (s.t.empty())
    throw OdeError("rotation_number: no sleep onsets in the horizon");
  RotationResult r = detect_rotation(s, opt);
  if (r.exact) return r;

  Trajectory tr2 = sim(p, opt.fallback_days);
  OnsetSeries s2 = onset_series(tr2);
  if (s2.t.empty())
    throw OdeError("rotation_number: no sleep onsets in the horizon");
  RotationResult out;
  out.p = static_cast<long>(s2.t.size());
  out.q = static_cast<long>(s2.minima_t.size());
  out.rho = out.p > 0 ? double(out.q) / double(out.p) : 0.0;
  out.exact = false;
  return out;
}

namespace {

Trajectory simulate_smooth_days(const ParameterSet& p, double days) {
  return simulate_default(p, days);
}

}  // namespace

RotationResult rotation_number(const ParameterSet& p,
                               const RotationOptions& opt) {
  return rotation_number(p, simulate_smooth_days, opt);
}

std::vector<double> descending_grid(double k_hi, double k_lo, double step) {
  if (!(step > 0.0) || !(k_hi >= k_lo))
    throw std::invalid_argument("descending_grid: bad range or step");
  std::vector<double> ks;
  const long n = std::lround(std::floor((k_hi - k_lo) / step + 1e-9));
  for (long i = 0; i <= n; ++i) ks.push_back(k_hi - double(i) * step);
  if (ks.back() > k_lo + 1e-12) ks.push_back(k_lo);
  return ks;
}

Staircase staircase(const std::vector<double>& k_descending,
                    const ParameterSet& base, const SimulateDays& sim,
                    int jobs, const RotationOptions& opt) {
  for (std::size_t i = 0; i + 1 < k_descending.size(); ++i)
    if (!(k_descending[i] > k_descending[i + 1]))
      throw std::invalid_argument("staircase: grid must be strictly decreasing");
  Staircase out;
  out.cells.resize(k_descending.size());
  parallel_for(k_descending.size(), jobs, [&](std::size_t i) {
    ParameterSet p = base;
    p.k = k_descending[i];
    out.cells[i] = {p.k, rotation_number(p, sim, opt)};
  });

  for (std::size_t i = 0; i < out.cells.size();) {
    if (!out.cells[i].rot.exact) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < out.cells.size() && out.cells[j + 1].rot.exact &&
           out.cells[j + 1].rot.p == out.cells[i].rot.p &&
           out.cells[j + 1].rot.q == out.cells[i].rot.q)
      ++j;
    out.plateaus.push_back({out.cells[j].k, out.cells[i].k,
                            out.cells[i].rot.p, out.cells[i].rot.q,
                            out.cells[i].rot.rho});
    i = j + 1;
  }
  return out;
}

std::vector<FareyPairReport> farey_check(const Staircase& s,
                                         const ParameterSet& base,
                                         const SimulateDays& sim, int budget,
                                         const RotationOptions& opt) {
  std::vector<FareyPairReport> out;
  auto rho_at = [&](double k) {
    ParameterSet p = base;
    p.k = k;
    return rotation_number(p, sim, opt);
  };
  for (std::size_t i = 0; i + 1 < s.plateaus.size(); ++i) {
    FareyPairReport rep;
    rep.hi = s.plateaus[i];
    rep.lo = s.plateaus[i + 1];
    const long det = rep.hi.q * rep.lo.p - rep.lo.q * rep.hi.p;
    rep.applicable = std::labs(det) == 1;
    if (!rep.applicable) {
      out.push_back(rep);
      continue;
    }
    rep.mediant_p = rep.hi.p + rep.lo.p;
    rep.mediant_q = rep.hi.q + rep.lo.q;
    const double med = double(rep.mediant_q) / double(rep.mediant_p);
    double k_hi = rep.hi.k_lo;  // bottom of the upper plateau
    double k_lo = rep.lo.k_hi;  // top of the lower plateau
    for (int it = 0; it < budget && k_hi - k_lo > 1e-12; ++it) {
      const double km = 0.5 * (k_hi + k_lo);
      const RotationResult r = rho_at(km);
      if (r.exact && r.p == rep.mediant_p && r.q == rep.mediant_q) {
        rep.found = true;
        rep.k_found = km;
        break;
      }
      if (r.rho > med)
        k_hi = km;
      else
        k_lo = km;
    }
    out.push_back(rep);
  }
  return out;
}

}  // namespace swff
