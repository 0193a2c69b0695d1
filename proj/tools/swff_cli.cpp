#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "swff/atlas.hpp"
#include "swff/chs.hpp"
#include "swff/circlemap.hpp"
#include "swff/fastslow.hpp"
#include "swff/integrate.hpp"
#include "swff/io_util.hpp"
#include "swff/params.hpp"
#include "swff/rotation.hpp"
#include "swff/sweep.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  int jobs = 0;
  std::optional<double> k;
  std::optional<double> alpha_scn;
  std::optional<double> phi;
};

void add_common(CLI::App* cmd, CommonArgs& c) {
  cmd->add_option("--config", c.config_path,
                  "JSON file with model parameter overrides");
  cmd->add_option("--out", c.out_dir, "Output directory (created if absent)");
  cmd->add_option("--jobs", c.jobs,
                  "Worker threads (0 = auto; SWFF_JOBS overrides)");
  cmd->add_option("--k", c.k, "Homeostatic time-scale factor in (0, 1]");
  cmd->add_option("--alpha-scn", c.alpha_scn, "Pacemaker response width");
  cmd->add_option("--phi", c.phi, "Circadian phase offset (hours)");
}

swff::ParameterSet resolve_params(const CommonArgs& c) {
  swff::ParameterSet p;
  if (!c.config_path.empty()) {
    std::ifstream in(c.config_path);
    if (!in)
      throw std::invalid_argument("cannot read config file: " + c.config_path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument(std::string("config is not valid JSON: ") +
                                  e.what());
    }
    p = swff::params_from_json(j);
  }
  if (c.k) p.k = *c.k;
  if (c.alpha_scn) p.alpha_SCN = *c.alpha_scn;
  if (c.phi) p.phi = *c.phi;
  p.validate();
  return p;
}

int resolve_jobs(int flag_jobs) {
  if (const char* env = std::getenv("SWFF_JOBS")) {
    try {
      return std::stoi(env);
    } catch (...) {
      // fall through to the flag
    }
  }
  return flag_jobs;
}

std::string out_path(const CommonArgs& c, const std::string& name) {
  std::filesystem::create_directories(c.out_dir);
  return (std::filesystem::path(c.out_dir) / name).string();
}

struct RangeSpec {
  double a = 0.0;
  double b = 0.0;
  double step = 0.0;
};

RangeSpec parse_range(const std::string& text, const std::string& flag) {
  RangeSpec r;
  const int n = std::sscanf(text.c_str(), "%lf:%lf:%lf", &r.a, &r.b, &r.step);
  if (n != 3 || !(r.step > 0.0))
    throw std::invalid_argument(flag + " must be lo:hi:step with step > 0");
  if (r.a > r.b) std::swap(r.a, r.b);
  if (!(r.b > r.a))
    throw std::invalid_argument(flag + " must span a nonempty interval");
  return r;
}

std::vector<double> ascending_grid(const RangeSpec& r) {
  auto g = swff::descending_grid(r.b, r.a, r.step);
  std::reverse(g.begin(), g.end());
  return g;
}

nlohmann::json base_config(const swff::ParameterSet& p) {
  nlohmann::json j;
  j["params"] = swff::to_json(p);
  return j;
}

int cmd_simulate(const CommonArgs& c, double days, double sample_dt) {
  const swff::ParameterSet p = resolve_params(c);
  swff::IntegrateOptions opt;
  opt.record_samples = true;
  opt.sample_dt = sample_dt;
  const swff::Trajectory tr = swff::simulate_default(p, days, opt);

  swff::io::write_trajectory_csv(out_path(c, "trajectory.csv"), tr);
  swff::io::write_events_csv(out_path(c, "events.csv"), tr);

  nlohmann::json cfg = base_config(p);
  cfg["days"] = days;
  cfg["sample_dt"] = sample_dt;
  const swff::DurationStats stats = swff::duration_stats(tr, 50.0 * 24.0);
  nlohmann::json summary;
  summary["mean_wake_h"] = stats.mean_wake;
  summary["mean_sleep_h"] = stats.mean_sleep;
  summary["n_wake"] = stats.n_wake;
  summary["n_sleep"] = stats.n_sleep;
  summary["mean_onset_phase"] = stats.mean_onset_phase;
  nlohmann::json manifest =
      swff::io::manifest_json("simulate", "timeseries-default", cfg);
  manifest["summary"] = summary;
  swff::io::write_json(out_path(c, "manifest.json"), manifest);
  std::cout << "simulate: " << tr.events.size() << " events, mean wake "
            << stats.mean_wake << " h, mean sleep " << stats.mean_sleep
            << " h\n";
  return 0;
}

int cmd_zsurface(const CommonArgs& c, int nc, int nh) {
  const swff::ParameterSet p = resolve_params(c);
  const auto rows = swff::zsurface_grid(nc, nh, p);
  swff::io::write_zsurface_csv(out_path(c, "zsurface.csv"), rows);
  const std::vector<swff::FoldCurve> curves = {
      swff::sn_curve(swff::FoldSide::lower, 65, p),
      swff::sn_curve(swff::FoldSide::upper, 65, p)};
  swff::io::write_fold_curves_csv(out_path(c, "fold_curves.csv"), curves);

  nlohmann::json cfg = base_config(p);
  cfg["grid_c"] = nc;
  cfg["grid_h"] = nh;
  swff::io::write_json(out_path(c, "manifest.json"),
                       swff::io::manifest_json("zsurface", "zsurface", cfg));
  std::cout << "zsurface: " << rows.size() << " sheet points\n";
  return 0;
}

int cmd_map(const CommonArgs& c, int order, int grid) {
  const swff::ParameterSet p = resolve_params(c);
  swff::MapOptions mopt;
  mopt.base_grid = grid;
  mopt.jobs = resolve_jobs(c.jobs);
  const swff::MapBuilder builder(p, order, mopt);
  const swff::SampledCircleMap m = builder.build();
  swff::io::write_map_csv(out_path(c, "map.csv"), m);

  nlohmann::json mj = swff::io::map_summary_json(m);
  const auto fps = swff::find_fixed_points(m, &builder);
  nlohmann::json fj = nlohmann::json::array();
  for (const auto& fp : fps)
    fj.push_back({{"phi", fp.phi},
                  {"slope", fp.slope},
                  {"stable", fp.stable},
                  {"degenerate", fp.degenerate}});
  mj["fixed_points"] = std::move(fj);
  swff::io::write_json(out_path(c, "map.json"), mj);

  nlohmann::json cfg = base_config(p);
  cfg["order"] = order;
  cfg["base_grid"] = grid;
  swff::io::write_json(
      out_path(c, "manifest.json"),
      swff::io::manifest_json("map", "map-return-" + std::to_string(order),
                              cfg));
  std::cout << "map: " << m.points.size() << " samples, "
            << m.discontinuities.size() << " discontinuities, " << fps.size()
            << " fixed points\n";
  return 0;
}

int run_staircase(const CommonArgs& c, const std::string& k_range, bool chs) {
  const swff::ParameterSet p = resolve_params(c);
  const RangeSpec r = parse_range(k_range, "--k-range");
  const auto ks = swff::descending_grid(r.b, r.a, r.step);
  const int jobs = resolve_jobs(c.jobs);
  const swff::Staircase s =
      chs ? swff::chs_staircase(ks, p, jobs)
          : swff::staircase(
                ks, p,
                [](const swff::ParameterSet& pp, double days) {
                  return swff::simulate_default(pp, days);
                },
                jobs);
  const char* prefix = chs ? "chs_" : "";
  swff::io::write_staircase_csv(out_path(c, std::string(prefix) + "staircase.csv"), s);
  swff::io::write_plateaus_csv(out_path(c, std::string(prefix) + "plateaus.csv"), s);

  nlohmann::json cfg = base_config(p);
  cfg["k_range"] = {{"lo", r.a}, {"hi", r.b}, {"step", r.step}};
  swff::io::write_json(
      out_path(c, "manifest.json"),
      swff::io::manifest_json(chs ? "chs" : "staircase",
                              chs ? "chs-staircase" : "staircase-k", cfg));
  std::cout << (chs ? "chs staircase: " : "staircase: ") << s.cells.size()
            << " cells, " << s.plateaus.size() << " plateaus\n";
  return 0;
}

int cmd_atlas(const CommonArgs& c, const std::string& k_range,
              const std::string& alpha_range) {
  const swff::ParameterSet p = resolve_params(c);
  const RangeSpec kr = parse_range(k_range, "--k-range");
  const RangeSpec ar = parse_range(alpha_range, "--alpha-range");
  const auto ks = swff::descending_grid(kr.b, kr.a, kr.step);
  const auto alphas = ascending_grid(ar);
  const auto cells = swff::rotation_atlas(
      alphas, ks, p,
      [](const swff::ParameterSet& pp, double days) {
        return swff::simulate_default(pp, days);
      },
      resolve_jobs(c.jobs));
  swff::io::write_atlas_csv(out_path(c, "atlas.csv"), cells);

  nlohmann::json cfg = base_config(p);
  cfg["k_range"] = {{"lo", kr.a}, {"hi", kr.b}, {"step", kr.step}};
  cfg["alpha_range"] = {{"lo", ar.a}, {"hi", ar.b}, {"step", ar.step}};
  swff::io::write_json(out_path(c, "manifest.json"),
                       swff::io::manifest_json("atlas", "atlas-k-alpha", cfg));
  std::cout << "atlas: " << cells.size() << " cells\n";
  return 0;
}

int cmd_chs_single(const CommonArgs& c, double days, double sample_dt) {
  const swff::ParameterSet p = resolve_params(c);
  swff::IntegrateOptions opt;
  opt.record_samples = true;
  opt.sample_dt = sample_dt;
  const swff::Trajectory tr = swff::chs_simulate_default(p, days, opt);
  swff::io::write_chs_trajectory_csv(out_path(c, "chs_trajectory.csv"), tr);
  swff::io::write_events_csv(out_path(c, "chs_events.csv"), tr);

  nlohmann::json cfg = base_config(p);
  cfg["days"] = days;
  cfg["sample_dt"] = sample_dt;
  swff::io::write_json(
      out_path(c, "manifest.json"),
      swff::io::manifest_json("chs", "chs-timeseries", cfg));
  std::cout << "chs: " << tr.events.size() << " events\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Sleep-wake flip-flop toolkit: exact-event simulation, fast-slow "
      "structure, sleep-onset circle maps, rotation staircases and a "
      "two-parameter bifurcation atlas"};
  app.require_subcommand(1);

  CommonArgs sim_args, z_args, map_args, st_args, at_args, chs_args;
  double sim_days = 30.0, sim_dt = 0.05;
  int z_nc = 41, z_nh = 161;
  int map_order = 1, map_grid = 512;
  std::string st_krange, at_krange, at_arange = "0.3:1.9:0.1";
  std::string chs_krange;
  double chs_days = 30.0, chs_dt = 0.05;

  CLI::App* sim = app.add_subcommand("simulate", "Integrate and export a trajectory");
  add_common(sim, sim_args);
  sim->add_option("--days", sim_days, "Length of the run in days");
  sim->add_option("--sample-dt", sim_dt, "Sample spacing (hours)");

  CLI::App* zs = app.add_subcommand("zsurface", "Fast-subsystem equilibrium sheet and fold curves");
  add_common(zs, z_args);
  zs->add_option("--grid-c", z_nc, "Grid points along c");
  zs->add_option("--grid-h", z_nh, "Grid points along h");

  CLI::App* mp = app.add_subcommand("map", "Sample a sleep-onset return map");
  add_common(mp, map_args);
  mp->add_option("--order", map_order, "Return-map order p");
  mp->add_option("--grid", map_grid, "Base phase-grid size");

  CLI::App* st = app.add_subcommand("staircase", "Rotation-number staircase over k");
  add_common(st, st_args);
  st->add_option("--k-range", st_krange, "k grid as lo:hi:step")->required();

  CLI::App* at = app.add_subcommand("atlas", "Rotation numbers on a (k, alpha) grid");
  add_common(at, at_args);
  at->add_option("--k-range", at_krange, "k grid as lo:hi:step")->required();
  at->add_option("--alpha-range", at_arange, "alpha grid as lo:hi:step");

  CLI::App* ch = app.add_subcommand("chs", "Hard-switch circadian limit");
  add_common(ch, chs_args);
  ch->add_option("--k-range", chs_krange,
                 "k grid as lo:hi:step (staircase mode)");
  ch->add_option("--days", chs_days, "Length of the single run in days");
  ch->add_option("--sample-dt", chs_dt, "Sample spacing (hours)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (sim->parsed()) return cmd_simulate(sim_args, sim_days, sim_dt);
    if (zs->parsed()) return cmd_zsurface(z_args, z_nc, z_nh);
    if (mp->parsed()) return cmd_map(map_args, map_order, map_grid);
    if (st->parsed()) return run_staircase(st_args, st_krange, false);
    if (at->parsed()) return cmd_atlas(at_args, at_krange, at_arange);
    if (ch->parsed()) {
      if (!chs_krange.empty()) return run_staircase(chs_args, chs_krange, true);
      return cmd_chs_single(chs_args, chs_days, chs_dt);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
