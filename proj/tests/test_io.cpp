#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "swff/io_util.hpp"

using namespace swff;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string first_line(const std::string& text) {
  return text.substr(0, text.find('\n'));
}

std::size_t count_lines(const std::string& text) {
  std::size_t n = 0;
  for (char c : text) n += (c == '\n');
  return n;
}

std::string tmp_path(const std::string& name) {
  return std::string("/tmp/swff_io_test_") + name;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("doubles are printed in shortest round-trip form") {
  CHECK(io::format_double(0.5) == "0.5");
  CHECK(io::format_double(0.0) == "0");
  CHECK(io::format_double(-2.0) == "-2");
  CHECK(io::format_double(1e100) == "1e+100");

  for (double v : {0.1, 1.0 / 3.0, 2.0 / 24.0, 323.88, -0.006,
                   6.283185307179586, 1e-17, 123456789.123,
                   5.0e-324, 1.7976931348623157e308}) {
    const std::string s = io::format_double(v);
    double back = 0.0;
    REQUIRE(std::sscanf(s.c_str(), "%lf", &back) == 1);
    CHECK(back == v);
  }
}

TEST_CASE("trajectory and event CSVs have the documented shapes") {
  ParameterSet p;
  IntegrateOptions opt;
  opt.record_samples = true;
  opt.sample_dt = 0.5;
  const Trajectory tr = simulate_default(p, 2.0, opt);

  const std::string tpath = tmp_path("traj.csv");
  io::write_trajectory_csv(tpath, tr);
  const std::string tcsv = slurp(tpath);
  CHECK(first_line(tcsv) == "t,f_W,f_S,f_SCN,h,c,theta,regime");
  CHECK(count_lines(tcsv) == tr.t.size() + 1);

  const std::string epath = tmp_path("events.csv");
  io::write_events_csv(epath, tr);
  const std::string ecsv = slurp(epath);
  CHECK(first_line(ecsv) == "t,kind,f_W,f_S,f_SCN,h,c,theta,phase");
  CHECK(count_lines(ecsv) == tr.events.size() + 1);
  CHECK(ecsv.find("sleep_onset") != std::string::npos);
  CHECK(ecsv.find("circadian_minimum") != std::string::npos);
}

TEST_CASE("hard-switch trajectories carry a region column") {
  ParameterSet p;
  IntegrateOptions opt;
  opt.record_samples = true;
  opt.sample_dt = 0.5;
  const Trajectory tr =
      chs_simulate(p, chs_default_initial_state(p), 0.0, 48.0, opt);
  const std::string path = tmp_path("chs_traj.csv");
  io::write_chs_trajectory_csv(path, tr);
  const std::string csv = slurp(path);
  CHECK(first_line(csv) == "t,f_W,f_S,f_SCN,h,c,theta,regime,region");
  CHECK(count_lines(csv) == tr.t.size() + 1);
}

TEST_CASE("surface and fold CSVs have the documented shapes") {
  ParameterSet p;
  const auto rows = zsurface_grid(5, 9, p);
  const std::string zpath = tmp_path("zsurface.csv");
  io::write_zsurface_csv(zpath, rows);
  const std::string zcsv = slurp(zpath);
  CHECK(first_line(zcsv) == "c,h,f_W,branch");
  CHECK(count_lines(zcsv) == rows.size() + 1);

  const std::vector<FoldCurve> curves = {sn_curve(FoldSide::lower, 17, p),
                                         sn_curve(FoldSide::upper, 17, p)};
  const std::string fpath = tmp_path("folds.csv");
  io::write_fold_curves_csv(fpath, curves);
  const std::string fcsv = slurp(fpath);
  CHECK(first_line(fcsv) == "side,c,h_fold,f_W_fold");
  CHECK(count_lines(fcsv) ==
        curves[0].samples.size() + curves[1].samples.size() + 1);
  CHECK(fcsv.find("lower") != std::string::npos);
  CHECK(fcsv.find("upper") != std::string::npos);
}

TEST_CASE("map CSV and summary agree with the sampled map") {
  SampledCircleMap m;
  m.order = 2;
  for (int i = 0; i < 8; ++i) {
    MapPoint pt;
    pt.x = i / 8.0;
    pt.y = i / 8.0 + 0.25 - (i >= 4 ? 0.5 : 0.0);
    pt.phi_requested = pt.x;
    m.points.push_back(pt);
  }
  annotate_map(m);

  const std::string path = tmp_path("map.csv");
  io::write_map_csv(path, m);
  const std::string csv = slurp(path);
  CHECK(first_line(csv) == "order,phi_n,phi_np,branch_id");
  CHECK(count_lines(csv) == m.points.size() + 1);

  const nlohmann::json j = io::map_summary_json(m);
  CHECK(j.at("order") == 2);
  CHECK(j.at("n_points") == m.points.size());
  CHECK(j.at("discontinuities").size() == m.discontinuities.size());
  CHECK(j.at("branches").size() == m.branches.size());
  CHECK(j.at("max_jump").get<double>() == doctest::Approx(m.max_jump()));
}

TEST_CASE("staircase, plateau and atlas CSVs have the documented shapes") {
  Staircase s;
  StaircaseCell c1;
  c1.k = 0.4;
  c1.rot = RotationResult{2, 1, 0.5, true};
  StaircaseCell c2;
  c2.k = 0.39;
  c2.rot = RotationResult{7, 3, 3.0 / 7.0, false};
  s.cells = {c1, c2};
  Plateau pl;
  pl.k_lo = 0.39;
  pl.k_hi = 0.4;
  pl.p = 2;
  pl.q = 1;
  pl.rho = 0.5;
  s.plateaus = {pl};

  const std::string spath = tmp_path("stairs.csv");
  io::write_staircase_csv(spath, s);
  const std::string scsv = slurp(spath);
  CHECK(first_line(scsv) == "k,rho_num,rho_den,rho,exact");
  CHECK(count_lines(scsv) == 3);
  CHECK(scsv.find("0.4,1,2,0.5,1") != std::string::npos);
  CHECK(scsv.find(",0") != std::string::npos);  // the non-exact cell

  const std::string ppath = tmp_path("plateaus.csv");
  io::write_plateaus_csv(ppath, s);
  const std::string pcsv = slurp(ppath);
  CHECK(first_line(pcsv) == "k_lo,k_hi,p,q,rho");
  CHECK(count_lines(pcsv) == 2);

  AtlasCell cell;
  cell.alpha_scn = 0.7;
  cell.k = 0.4;
  cell.rot = c1.rot;
  const std::string apath = tmp_path("atlas.csv");
  io::write_atlas_csv(apath, {cell});
  const std::string acsv = slurp(apath);
  CHECK(first_line(acsv) == "alpha_scn,k,rho_num,rho_den,rho,exact");
  CHECK(count_lines(acsv) == 2);
}

TEST_CASE("bifurcation records serialize with optional geometry") {
  BifurcationRecord r;
  r.kind = BifKind::SN;
  r.k = 0.503;
  r.alpha_scn = 0.7;
  r.phi = 0.41;
  r.slope = 0.98;
  r.pair_gap = 0.003;
  r.evidence = "pair gap shrank";
  const nlohmann::json j = io::bifurcations_json({r});
  REQUIRE(j.is_array());
  REQUIRE(j.size() == 1);
  CHECK(j[0].at("kind") == "SN");
  CHECK(j[0].at("k").get<double>() == doctest::Approx(0.503));
  CHECK(j[0].at("phi").get<double>() == doctest::Approx(0.41));
  CHECK(j[0].contains("pair_gap"));
  // endpoint_distance was never measured: the field is absent, not NaN.
  CHECK_FALSE(j[0].contains("endpoint_distance"));
}

TEST_CASE("manifests identify the tool and carry no timestamps") {
  ParameterSet p;
  nlohmann::json config;
  config["params"] = to_json(p);
  config["days"] = 30;
  const nlohmann::json m = io::manifest_json("simulate", "timeseries", config);
  CHECK(m.at("tool").at("name") == "swff");
  CHECK(m.at("tool").at("version") == io::kToolVersion);
  CHECK(m.at("subcommand") == "simulate");
  CHECK(m.at("target_figure") == "timeseries");
  CHECK(m.at("config").at("days") == 30);
  const std::string dumped = m.dump(2);
  CHECK(dumped.find("timestamp") == std::string::npos);
  CHECK(dumped.find("created") == std::string::npos);
  CHECK(dumped.find("date") == std::string::npos);

  // Serialization is deterministic.
  const nlohmann::json again =
      io::manifest_json("simulate", "timeseries", config);
  CHECK(again.dump(2) == dumped);
}

TEST_CASE("writes to impossible paths throw") {
  CHECK_THROWS_AS(io::write_text("/nonexistent_dir_xyz/file.txt", "hi"),
                  std::runtime_error);
}

}  // TEST_SUITE
