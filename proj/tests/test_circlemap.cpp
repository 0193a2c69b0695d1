#include <doctest.h>

#include <cmath>
#include <vector>

#include "swff/circlemap.hpp"
#include "swff/model.hpp"

using namespace swff;

namespace {

double wrap01(double x) {
  double r = std::fmod(x, 1.0);
  return r < 0.0 ? r + 1.0 : r;
}

SampledCircleMap synthetic_map(int n, const std::function<double(double)>& f) {
  SampledCircleMap m;
  m.order = 1;
  for (int i = 0; i < n; ++i) {
    MapPoint pt;
    pt.x = static_cast<double>(i) / n;
    pt.phi_requested = pt.x;
    pt.y = wrap01(f(pt.x));
    m.points.push_back(pt);
  }
  return m;
}

}  // namespace

TEST_SUITE("circlemap") {

TEST_CASE("a continuous degree-one map is a single branch") {
  SampledCircleMap m = synthetic_map(
      128, [](double x) { return x + 0.25 + 0.05 * std::sin(kTwoPi * x); });
  annotate_map(m);
  CHECK(m.discontinuities.empty());
  REQUIRE(m.branches.size() == 1);
  CHECK(m.branches[0].second == 128);
  for (const auto& pt : m.points) CHECK(pt.branch_id == 0);
  CHECK(m.max_jump() < 0.02);
  CHECK(find_fixed_points(m, nullptr).empty());
}

TEST_CASE("inserted jumps produce two branches with cyclic runs") {
  SampledCircleMap m = synthetic_map(128, [](double x) {
    const double base = x + 0.25 + 0.05 * std::sin(kTwoPi * x);
    return x < 0.5 ? base : base + 0.3;
  });
  annotate_map(m);
  REQUIRE(m.discontinuities.size() == 2);  // at x = 0.5 and at the wrap
  REQUIRE(m.branches.size() == 2);
  int total = 0;
  for (const auto& b : m.branches) total += b.second;
  CHECK(total == 128);
  // One gap sits at x = 0.5, the other between the last and first samples.
  bool seen_mid = false;
  bool seen_wrap = false;
  for (const auto& d : m.discontinuities) {
    if (std::abs(d.x_right - 0.5) < 1e-9) seen_mid = true;
    if (d.x_right == 0.0) seen_wrap = true;
    CHECK(d.jump > 0.2);
  }
  CHECK(seen_mid);
  CHECK(seen_wrap);
}

TEST_CASE("diagonal crossings of a perturbed rotation are located") {
  // y = x + 0.1 sin(2 pi x): fixed points at x = 0 (slope 1 + 0.2 pi,
  // unstable) and x = 0.5 (slope 1 - 0.2 pi, stable).
  SampledCircleMap m = synthetic_map(
      256, [](double x) { return x + 0.1 * std::sin(kTwoPi * x); });
  annotate_map(m);
  const auto fps = find_fixed_points(m, nullptr);
  REQUIRE(fps.size() == 2);
  const MapFixedPoint* lo = &fps[0];
  const MapFixedPoint* hi = &fps[1];
  if (phase_distance(lo->phi, 0.5) < phase_distance(hi->phi, 0.5))
    std::swap(lo, hi);
  // hi is the one near 0.5.
  CHECK(phase_distance(hi->phi, 0.5) < 2e-3);
  CHECK(hi->stable);
  CHECK(hi->slope == doctest::Approx(1.0 - 0.2 * 3.14159265).epsilon(0.02));
  CHECK(phase_distance(lo->phi, 0.0) < 2e-3);
  CHECK_FALSE(lo->stable);
  CHECK(lo->slope == doctest::Approx(1.0 + 0.2 * 3.14159265).epsilon(0.02));
  for (const auto& f : fps) CHECK_FALSE(f.degenerate);
}

TEST_CASE("the identity map is flagged degenerate everywhere") {
  SampledCircleMap m = synthetic_map(64, [](double x) { return x; });
  annotate_map(m);
  const auto fps = find_fixed_points(m, nullptr);
  CHECK(fps.size() >= 32);
  for (const auto& f : fps) CHECK(f.degenerate);
}

TEST_CASE("map order must be positive") {
  ParameterSet p;
  CHECK_THROWS_AS(MapBuilder(p, 0), std::invalid_argument);
  CHECK_THROWS_AS(MapBuilder(p, -2), std::invalid_argument);
}

TEST_CASE("direct fold starts serve phases away from the riding window") {
  ParameterSet p;
  const MapBuilder b(p, 1);
  const MapPoint s = b.sample(0.75);
  CHECK_FALSE(s.manifold_ic);
  CHECK(phase_distance(s.x, 0.75) <= b.options().direct_dev_tol + 1e-12);
  CHECK(s.t_first <= b.options().direct_budget + 1e-9);
  CHECK(s.y >= 0.0);
  CHECK(s.y < 1.0);
}

TEST_CASE("committal displacements serve phases inside the riding window") {
  ParameterSet p;
  const MapBuilder b(p, 1);
  const MapPoint s = b.sample(0.30);
  CHECK(s.manifold_ic);
  CHECK(s.offset_used >= b.options().commit_offset_min - 1e-15);
  CHECK(s.t_first <= b.options().commit_budget + 1e-9);
  CHECK(phase_distance(s.x, 0.30) < 0.02);
  CHECK(s.y >= 0.0);
  CHECK(s.y < 1.0);
}

TEST_CASE("sampling is deterministic") {
  ParameterSet p;
  const MapBuilder b(p, 1);
  const MapPoint a = b.sample(0.62);
  const MapPoint c = b.sample(0.62);
  CHECK(a.x == c.x);
  CHECK(a.y == c.y);
  CHECK(a.t_first == c.t_first);
  CHECK(a.offset_used == c.offset_used);
}

TEST_CASE("initial conditions agree with the manifold construction") {
  ParameterSet p;
  const MapBuilder b(p, 1);
  for (double phi : {0.15, 0.45, 0.8}) {
    const StateVec a = b.initial_condition(phi, 1e-3);
    const StateVec c = unstable_manifold_ic(phi, 1e-3, p);
    for (std::size_t i = 0; i < a.size(); ++i)
      CHECK(a[i] == doctest::Approx(c[i]).epsilon(1e-7));
  }
}

TEST_CASE("the committal offset floor barely moves the landing phase") {
  ParameterSet p;
  MapOptions opt_a;
  MapOptions opt_b;
  opt_b.commit_offset_min = 2e-3;
  const MapBuilder ba(p, 1, opt_a);
  const MapBuilder bb(p, 1, opt_b);
  const MapPoint sa = ba.sample(0.30);
  const MapPoint sb = bb.sample(0.30);
  REQUIRE(sa.manifold_ic);
  REQUIRE(sb.manifold_ic);
  CHECK(phase_distance(sa.x, sb.x) < 5e-3);
  CHECK(phase_distance(sa.y, sb.y) < 5e-3);
}

TEST_CASE("the default first-return map has the known jump geometry") {
  ParameterSet p;
  MapOptions opt;
  opt.base_grid = 96;
  const MapBuilder b(p, 1, opt);
  const SampledCircleMap m = b.build();
  CHECK(m.order == 1);
  CHECK(m.points.size() >= 96);
  for (const auto& pt : m.points) {
    CHECK(pt.y >= 0.0);
    CHECK(pt.y < 1.0);
  }
  for (std::size_t i = 1; i < m.points.size(); ++i)
    CHECK(m.points[i].x > m.points[i - 1].x);

  REQUIRE_FALSE(m.discontinuities.empty());
  // The dominant jump: left flank rides long (wrapped y just above 0),
  // right flank crashes immediately (y near 0.80), square-root left slope.
  const Discontinuity* big = &m.discontinuities[0];
  for (const auto& d : m.discontinuities)
    if (d.jump > big->jump) big = &d;
  CHECK(big->x_left > 0.45);
  CHECK(big->x_right < 0.60);
  CHECK(phase_distance(big->y_left, 0.0722) < 0.02);
  CHECK(phase_distance(big->y_right, 0.8033) < 0.02);
  CHECK(big->left_slope_infinite);

  // Branch-wise the lifted graph is monotone nondecreasing.
  for (const auto& br : m.branches) {
    const int n = static_cast<int>(m.points.size());
    for (int j = 1; j < br.second; ++j) {
      const MapPoint& prev = m.points[static_cast<std::size_t>(
          (br.first + j - 1) % n)];
      const MapPoint& cur =
          m.points[static_cast<std::size_t>((br.first + j) % n)];
      double dy = cur.y - prev.y;
      dy -= std::floor(dy + 0.5);  // circular signed difference
      CHECK(dy > -2e-3);
    }
  }
}

TEST_CASE("the default map fixes the entrained onset phase") {
  ParameterSet p;
  MapOptions opt;
  opt.base_grid = 96;
  const MapBuilder b(p, 1, opt);
  const SampledCircleMap m = b.build();
  const auto fps = find_fixed_points(m, &b);
  REQUIRE_FALSE(fps.empty());
  const MapFixedPoint* stable = nullptr;
  for (const auto& f : fps)
    if (f.stable && !f.degenerate) stable = &f;
  REQUIRE(stable != nullptr);
  CHECK(phase_distance(stable->phi, 0.8242) < 3e-3);
  CHECK(stable->slope < 1.0);
}

TEST_CASE("the second-return map at k = 0.36 fixes the alternating orbit") {
  ParameterSet p;
  p.k = 0.36;
  MapOptions opt;
  opt.base_grid = 64;
  opt.refine_rounds = 1;
  const MapBuilder b(p, 2, opt);
  const SampledCircleMap m = b.build();
  CHECK(m.order == 2);
  const auto fps = find_fixed_points(m, &b);
  int stable_count = 0;
  for (const auto& f : fps) stable_count += (f.stable && !f.degenerate);
  // The period-two orbit contributes one stable fixed point per visited
  // phase.
  CHECK(stable_count >= 2);
}

TEST_CASE("the tangency witness needs sampled input") {
  ParameterSet p;
  Trajectory tr;  // no samples
  const FoldCurve upper = sn_curve(FoldSide::upper, 17, p);
  CHECK_THROWS_AS(tangency_witness(tr, upper, p), std::invalid_argument);
}

TEST_CASE("default-day trajectories graze the upper fold curve") {
  ParameterSet p;
  IntegrateOptions iopt;
  iopt.record_samples = true;
  iopt.sample_dt = 0.02;
  const Trajectory tr = simulate_default(p, 12.0, iopt);
  const FoldCurve upper = sn_curve(FoldSide::upper, 129, p);
  const TangencyWitness w = tangency_witness(tr, upper, p);
  CHECK(std::isfinite(w.min_distance));
  CHECK(w.min_distance < 0.2);
  CHECK(w.angle >= 0.0);
  CHECK(w.angle <= 1.5707963268);
  CHECK(w.t_at_min >= 0.0);
  CHECK(w.t_at_min <= 12.0 * 24.0);
  CHECK(w.c_at_min >= -1.0);
  CHECK(w.c_at_min <= 1.0);
}

}  // TEST_SUITE
