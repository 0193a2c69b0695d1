#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <vector>

#include "swff/chs.hpp"
#include "swff/fastslow.hpp"
#include "swff/model.hpp"

using namespace swff;

TEST_SUITE("chs") {

TEST_CASE("region numbering follows the two switching flags") {
  CHECK(chs_region_index(Regime{true, true}) == 1);
  CHECK(chs_region_index(Regime{true, false}) == 2);
  CHECK(chs_region_index(Regime{false, false}) == 3);
  CHECK(chs_region_index(Regime{false, true}) == 4);
}

TEST_CASE("the hard-switch field pins the pacemaker relaxation target") {
  ParameterSet p;
  StateVec y = chs_default_initial_state(p);
  y[iFSCN] = 2.0;
  StateVec dy{};
  const Regime high{true, true};
  chs_vector_field(y, high, p, dy);
  CHECK(dy[iFSCN] ==
        doctest::Approx((scn_drive_limit(true, p) - 2.0) / p.tau_SCN)
            .epsilon(1e-14));
  const Regime low{true, false};
  chs_vector_field(y, low, p, dy);
  CHECK(dy[iFSCN] ==
        doctest::Approx((scn_drive_limit(false, p) - 2.0) / p.tau_SCN)
            .epsilon(1e-14));

  // Every other channel agrees with the smooth field.
  StateVec dy_smooth{};
  vector_field(y, high, p, dy_smooth);
  chs_vector_field(y, high, p, dy);
  for (std::size_t i = 0; i < dy.size(); ++i) {
    if (i == iFSCN) continue;
    CHECK(dy[i] == dy_smooth[i]);
  }
}

TEST_CASE("hard-switch runs do not depend on the response width") {
  // The saturated pacemaker levels carry no alpha_SCN dependence, so the
  // trajectory must be bitwise identical across alpha values.
  ParameterSet a;
  a.alpha_SCN = 0.3;
  ParameterSet b;
  b.alpha_SCN = 1.5;
  const Trajectory ta = chs_simulate_default(a, 10.0);
  const Trajectory tb = chs_simulate_default(b, 10.0);
  REQUIRE(ta.events.size() == tb.events.size());
  for (std::size_t i = 0; i < ta.events.size(); ++i) {
    CHECK(ta.events[i].t == tb.events[i].t);
    CHECK(ta.events[i].kind == tb.events[i].kind);
  }
  for (std::size_t i = 0; i < ta.y_final.size(); ++i)
    CHECK(ta.y_final[i] == tb.y_final[i]);
}

TEST_CASE("circadian-line crossings match the arccos schedule") {
  ParameterSet p;
  const StateVec y0 = chs_default_initial_state(p);
  const double horizon = 10.0 * 24.0;
  const Trajectory tr = chs_simulate(p, y0, 0.0, horizon);

  std::vector<double> observed;
  for (const auto& e : tr.events)
    if (e.kind == EventKind::sigma_crossing_up ||
        e.kind == EventKind::sigma_crossing_down)
      observed.push_back(e.t);

  const std::vector<double> expected =
      chs_sigma_times(p, y0[iTheta], 0.0, horizon);
  REQUIRE(observed.size() == expected.size());
  REQUIRE(observed.size() >= 19);  // two per day
  for (std::size_t i = 0; i < observed.size(); ++i)
    CHECK(std::abs(observed[i] - expected[i]) < 1e-10);
}

TEST_CASE("sigma crossing directions alternate and match the c side") {
  ParameterSet p;
  const Trajectory tr = chs_simulate_default(p, 8.0);
  int last_dir = 0;  // +1 up, -1 down
  for (const auto& e : tr.events) {
    int dir = 0;
    if (e.kind == EventKind::sigma_crossing_up) dir = 1;
    if (e.kind == EventKind::sigma_crossing_down) dir = -1;
    if (dir == 0) continue;
    CHECK(dir != last_dir);
    last_dir = dir;
    // The localized state sits on the line itself.
    CHECK(std::abs(e.y[iC] - p.beta_SCN) < 1e-7);
  }
}

TEST_CASE("sampled regions are consistent with the state") {
  ParameterSet p;
  IntegrateOptions opt;
  opt.record_samples = true;
  opt.sample_dt = 0.1;
  const Trajectory tr = chs_simulate(p, chs_default_initial_state(p), 0.0,
                                     6.0 * 24.0, opt);
  REQUIRE(tr.t.size() == tr.regime.size());
  std::size_t checked = 0;
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    const double dc = sigma_distance(tr.y[i], p);
    const double dw = switch_distance(tr.y[i], p);
    if (std::abs(dc) < 1e-6 || std::abs(dw) < 1e-6) continue;  // on a line
    CHECK(tr.regime[i].scn_high == (dc > 0.0));
    CHECK(tr.regime[i].wake == (dw > 0.0));
    const int region = chs_region_index(tr.regime[i]);
    CHECK(region >= 1);
    CHECK(region <= 4);
    ++checked;
  }
  CHECK(checked > 1000);
}

TEST_CASE("the circadian channels are shared with the smooth model") {
  ParameterSet p;
  const Trajectory hard = chs_simulate_default(p, 6.0);
  const Trajectory smooth = simulate_default(p, 6.0);
  const auto mh = hard.events_of_kind(EventKind::circadian_minimum);
  const auto ms = smooth.events_of_kind(EventKind::circadian_minimum);
  REQUIRE(mh.size() == ms.size());
  for (std::size_t i = 0; i < mh.size(); ++i) {
    CHECK(mh[i].t == ms[i].t);  // scheduled from the same linear phase
    CHECK(std::abs(mh[i].y[iC] + 1.0) < 1e-9);
  }
}

TEST_CASE("saturated folds coincide with the smooth folds at the extremes") {
  ParameterSet p;
  const FoldPair high = chs_fold_points(true, p);
  const FoldPair low = chs_fold_points(false, p);
  const FoldPair smooth_high = fold_points(1.0, p);
  const FoldPair smooth_low = fold_points(-1.0, p);
  CHECK(std::abs(high.lower.h - smooth_high.lower.h) < 1e-9);
  CHECK(std::abs(high.upper.h - smooth_high.upper.h) < 1e-9);
  CHECK(std::abs(low.lower.h - smooth_low.lower.h) < 1e-9);
  CHECK(std::abs(low.upper.h - smooth_low.upper.h) < 1e-9);

  // And the levels themselves are width-independent.
  for (double alpha : {0.3, 0.7, 1.5, 3.0}) {
    ParameterSet q;
    q.alpha_SCN = alpha;
    const FoldPair fp = chs_fold_points(true, q);
    CHECK(std::abs(fp.lower.h - high.lower.h) < 1e-10);
    CHECK(std::abs(fp.upper.h - high.upper.h) < 1e-10);
  }
}

TEST_CASE("wake and sleep events alternate in the hard-switch limit") {
  ParameterSet p;
  p.k = 0.5;
  const Trajectory tr = chs_simulate_default(p, 40.0);
  EventKind last = EventKind::circadian_minimum;
  std::size_t n_switch = 0;
  for (const auto& e : tr.events) {
    if (e.kind != EventKind::sleep_onset && e.kind != EventKind::wake_onset)
      continue;
    if (n_switch > 0) CHECK(e.kind != last);
    last = e.kind;
    ++n_switch;
    CHECK(std::abs(e.y[iFW] - p.theta_W) < 1e-6);
  }
  CHECK(n_switch > 40);
  CHECK(tr.min_crossing_product > -1e-10);
}

TEST_CASE("the default day phase-locks in the hard-switch limit") {
  ParameterSet p;  // k = 1
  const RotationResult r = rotation_number(
      p, [](const ParameterSet& q, double days) {
        return chs_simulate_default(q, days);
      });
  CHECK(r.exact);
  CHECK(r.p == 1);
  CHECK(r.q == 1);
}

TEST_CASE("a coarse hard-switch staircase is monotone in k") {
  ParameterSet p;
  const std::vector<double> ks = {1.0, 0.7, 0.5, 0.36, 0.3};
  const Staircase s = chs_staircase(ks, p);
  REQUIRE(s.cells.size() == ks.size());
  double prev = 2.0;
  for (const auto& cell : s.cells) {
    REQUIRE(cell.rot.p > 0);
    const double rho = cell.rot.rho;
    CHECK(rho > 0.0);
    CHECK(rho <= 1.0);
    CHECK(rho <= prev + 1e-12);
    prev = rho;
  }
}

}  // TEST_SUITE
