#pragma once

#include <filesystem>
#include <string>

#include "strata/levels.hpp"
#include "strata/refine.hpp"
#include "strata/search.hpp"

namespace strata {

inline constexpr int kPathSchemaVersion = 1;

/// Path document: schema_version, start, goal, total_cost, steps, segments,
/// stats and (unless `include_timing` is false) a separate timing block.
/// Everything outside the timing block is deterministic for a given query.
std::string path_json(const PlanResult& result, const Pose& start, const Pose& goal, const Lattice& lattice,
                      bool include_timing = true);

std::string refine_report_json(const Path& original, const RefinedPath& refined, const Lattice& lattice);

/// Level-1 height map as a graymap with the path drawn on top: base
/// positions at 255, Level-1 foot contacts at 0.
void write_path_overlay(const std::filesystem::path& file, const LevelMaps& maps, const Path& path,
                        const RobotGeometry& robot);

}  // namespace strata
