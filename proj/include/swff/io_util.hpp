#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "swff/atlas.hpp"
#include "swff/chs.hpp"
#include "swff/circlemap.hpp"
#include "swff/fastslow.hpp"
#include "swff/integrate.hpp"
#include "swff/rotation.hpp"

namespace swff::io {

inline constexpr const char* kToolName = "swff";
inline constexpr const char* kToolVersion = "1.0.0";

/// Shortest round-trip decimal form of a double (deterministic).
[[nodiscard]] std::string format_double(double v);

void write_text(const std::string& path, const std::string& text);

void write_trajectory_csv(const std::string& path, const Trajectory& tr);

/// Trajectory rows with an extra hard-switch region column (1..4).
void write_chs_trajectory_csv(const std::string& path, const Trajectory& tr);

void write_events_csv(const std::string& path, const Trajectory& tr);

void write_zsurface_csv(const std::string& path,
                        const std::vector<ZSurfaceRow>& rows);

void write_fold_curves_csv(const std::string& path,
                           const std::vector<FoldCurve>& curves);

void write_map_csv(const std::string& path, const SampledCircleMap& m);

[[nodiscard]] nlohmann::json map_summary_json(const SampledCircleMap& m);

void write_staircase_csv(const std::string& path, const Staircase& s);

void write_plateaus_csv(const std::string& path, const Staircase& s);

void write_atlas_csv(const std::string& path,
                     const std::vector<AtlasCell>& cells);

[[nodiscard]] nlohmann::json bifurcations_json(
    const std::vector<BifurcationRecord>& records);

/// Run manifest: effective configuration, tool identity and the figure the
/// output corresponds to. Contains no timestamps so reruns are
/// byte-identical.
[[nodiscard]] nlohmann::json manifest_json(const std::string& subcommand,
                                           const std::string& target_figure,
                                           const nlohmann::json& config);

void write_json(const std::string& path, const nlohmann::json& j);

}  // namespace swff::io
