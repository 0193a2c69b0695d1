#include "swff/io_util.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace swff::io {

namespace {

void append_state(std::ostringstream& os, const StateVec& y) {
  for (int i = 0; i < 6; ++i) os << ',' << format_double(y[static_cast<std::size_t>(i)]);
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  // Prefer the shortest representation that round-trips.
  for (int prec = 1; prec < 17; ++prec) {
    char probe[32];
    std::snprintf(probe, sizeof probe, "%.*g", prec, v);
    double back = 0.0;
    std::sscanf(probe, "%lf", &back);
    if (back == v) return probe;
  }
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_trajectory_csv(const std::string& path, const Trajectory& tr) {
  std::ostringstream os;
  os << "t,f_W,f_S,f_SCN,h,c,theta,regime\n";
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    os << format_double(tr.t[i]);
    append_state(os, tr.y[i]);
    os << ',' << (tr.regime[i].wake ? 1 : 0) << '\n';
  }
  write_text(path, os.str());
}

void write_chs_trajectory_csv(const std::string& path, const Trajectory& tr) {
  std::ostringstream os;
  os << "t,f_W,f_S,f_SCN,h,c,theta,regime,region\n";
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    os << format_double(tr.t[i]);
    append_state(os, tr.y[i]);
    os << ',' << (tr.regime[i].wake ? 1 : 0) << ','
       << chs_region_index(tr.regime[i]) << '\n';
  }
  write_text(path, os.str());
}

void write_events_csv(const std::string& path, const Trajectory& tr) {
  std::ostringstream os;
  os << "t,kind,f_W,f_S,f_SCN,h,c,theta,phase\n";
  for (const auto& e : tr.events) {
    os << format_double(e.t) << ',' << to_string(e.kind);
    append_state(os, e.y);
    os << ',' << format_double(e.phase) << '\n';
  }
  write_text(path, os.str());
}

void write_zsurface_csv(const std::string& path,
                        const std::vector<ZSurfaceRow>& rows) {
  std::ostringstream os;
  os << "c,h,f_W,branch\n";
  for (const auto& r : rows)
    os << format_double(r.c) << ',' << format_double(r.h) << ','
       << format_double(r.f_W) << ',' << to_string(r.branch) << '\n';
  write_text(path, os.str());
}

void write_fold_curves_csv(const std::string& path,
                           const std::vector<FoldCurve>& curves) {
  std::ostringstream os;
  os << "side,c,h_fold,f_W_fold\n";
  for (const auto& curve : curves)
    for (const auto& s : curve.samples)
      os << to_string(curve.side) << ',' << format_double(s.c) << ','
         << format_double(s.h) << ',' << format_double(s.f_W) << '\n';
  write_text(path, os.str());
}

void write_map_csv(const std::string& path, const SampledCircleMap& m) {
  std::ostringstream os;
  os << "order,phi_n,phi_np,branch_id\n";
  for (const auto& pt : m.points)
    os << m.order << ',' << format_double(pt.x) << ',' << format_double(pt.y)
       << ',' << pt.branch_id << '\n';
  write_text(path, os.str());
}

nlohmann::json map_summary_json(const SampledCircleMap& m) {
  nlohmann::json j;
  j["order"] = m.order;
  j["n_points"] = m.points.size();
  j["max_jump"] = m.max_jump();
  nlohmann::json discs = nlohmann::json::array();
  for (const auto& d : m.discontinuities) {
    discs.push_back({{"x_left", d.x_left},
                     {"x_right", d.x_right},
                     {"y_left", d.y_left},
                     {"y_right", d.y_right},
                     {"jump", d.jump},
                     {"left_slope_infinite", d.left_slope_infinite},
                     {"right_slope_infinite", d.right_slope_infinite}});
  }
  j["discontinuities"] = std::move(discs);
  nlohmann::json branches = nlohmann::json::array();
  for (const auto& [start, len] : m.branches)
    branches.push_back({{"start_index", start}, {"length", len}});
  j["branches"] = std::move(branches);
  return j;
}

void write_staircase_csv(const std::string& path, const Staircase& s) {
  std::ostringstream os;
  os << "k,rho_num,rho_den,rho,exact\n";
  for (const auto& cell : s.cells)
    os << format_double(cell.k) << ',' << cell.rot.q << ',' << cell.rot.p
       << ',' << format_double(cell.rot.rho) << ',' << (cell.rot.exact ? 1 : 0)
       << '\n';
  write_text(path, os.str());
}

void write_plateaus_csv(const std::string& path, const Staircase& s) {
  std::ostringstream os;
  os << "k_lo,k_hi,p,q,rho\n";
  for (const auto& pl : s.plateaus)
    os << format_double(pl.k_lo) << ',' << format_double(pl.k_hi) << ','
       << pl.p << ',' << pl.q << ',' << format_double(pl.rho) << '\n';
  write_text(path, os.str());
}

void write_atlas_csv(const std::string& path,
                     const std::vector<AtlasCell>& cells) {
  std::ostringstream os;
  os << "alpha_scn,k,rho_num,rho_den,rho,exact\n";
  for (const auto& c : cells)
    os << format_double(c.alpha_scn) << ',' << format_double(c.k) << ','
       << c.rot.q << ',' << c.rot.p << ',' << format_double(c.rot.rho) << ','
       << (c.rot.exact ? 1 : 0) << '\n';
  write_text(path, os.str());
}

nlohmann::json bifurcations_json(const std::vector<BifurcationRecord>& records) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : records) {
    nlohmann::json j;
    j["kind"] = to_string(r.kind);
    j["k"] = r.k;
    j["alpha_scn"] = r.alpha_scn;
    if (r.phi == r.phi) j["phi"] = r.phi;
    if (r.slope == r.slope) j["slope"] = r.slope;
    if (r.pair_gap == r.pair_gap) j["pair_gap"] = r.pair_gap;
    if (r.endpoint_distance == r.endpoint_distance)
      j["endpoint_distance"] = r.endpoint_distance;
    j["evidence"] = r.evidence;
    arr.push_back(std::move(j));
  }
  return arr;
}

nlohmann::json manifest_json(const std::string& subcommand,
                             const std::string& target_figure,
                             const nlohmann::json& config) {
  nlohmann::json j;
  j["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  j["subcommand"] = subcommand;
  j["target_figure"] = target_figure;
  j["config"] = config;
  return j;
}

void write_json(const std::string& path, const nlohmann::json& j) {
  write_text(path, j.dump(2) + "\n");
}

}  // namespace swff::io
