#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "strata/gridmap.hpp"

namespace strata {

using ParamMap = std::map<std::string, std::string>;

/// A generated or loaded planning problem. Poses are kept as text
/// (`L1 x y theta`) and parsed against the map's lattice by the caller.
struct Scenario {
  std::string name;
  std::string kind;
  HeightGrid map;
  std::string start;
  std::string goal;
  bool expect_reachable = true;
  ParamMap params;  // generator parameters, echoed to the .scn file
};

/// Generator kinds: flat, corridor, bar, stairs, ramp, clutter, composite,
/// maze, rough, wall. Unknown kinds or invalid parameters throw
/// ContractError. Deterministic for a given parameter set (including "seed").
Scenario generate_scenario(const std::string& kind, const ParamMap& params = {});

/// Writes `<dir>/<name>.hmap` and `<dir>/<name>.scn`; returns the .scn path.
std::filesystem::path save_scenario(const Scenario& scenario, const std::filesystem::path& dir);

/// Reads a .scn file (key = value lines) and the height map it references
/// (path relative to the .scn file).
Scenario load_scenario(const std::filesystem::path& path);

/// Parses `key = value` lines; '#' starts a comment. Throws ParseError.
ParamMap parse_key_values(std::istream& in);

/// Fine-grid column (or row) index of the obstacle edge nearest to world
/// coordinate `x`, rounded so edges line up with the 10 cm grid.
int aligned_edge(double x, double origin, double resolution);

}  // namespace strata
