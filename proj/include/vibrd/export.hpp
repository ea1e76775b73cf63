#pragma once

#include <filesystem>
#include <string>

#include "vibrd/dynamics.hpp"

namespace vibrd {

/// Writes `t,x_1,...,x_n,gap,norm_delta,norm_eps` with 12 significant digits;
/// byte-deterministic for a fixed trajectory.
void export_csv(const TrajectoryRecord& traj, const std::filesystem::path& path);

/// CSV rendered to a string (same contract as export_csv).
std::string trajectory_csv(const TrajectoryRecord& traj);

/// Parses a trajectory written by export_csv.
TrajectoryRecord parse_csv(const std::filesystem::path& path);

/// Minimal SVG line chart: state components and the gap over time.
std::string trajectory_svg(const TrajectoryRecord& traj, const std::string& title);

}  // namespace vibrd
