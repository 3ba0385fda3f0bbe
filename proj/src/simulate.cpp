#include <cmath>
#include <optional>

#include <json.hpp>

#include "strata/refine.hpp"
#include "strata/robot.hpp"

namespace strata {

namespace {

bool same_value(float a, float b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

bool in_square(const Lattice& lattice, const Pose& pose, WorldPoint c, double side) {
  if (side <= 0.0) return false;
  const WorldPoint w = lattice.world(pose);
  const double half = 0.5 * side + 1e-9;
  return std::abs(w.x - c.x) <= half && std::abs(w.y - c.y) <= half;
}

double distance(const Lattice& lattice, const Pose& a, const Pose& b) {
  const WorldPoint p = lattice.world(a);
  const WorldPoint q = lattice.world(b);
  return std::hypot(p.x - q.x, p.y - q.y);
}

void restamp(Path& path) {
  double acc = 0.0;
  for (std::size_t i = 0; i < path.steps.size(); ++i) {
    if (i == 0) path.steps[i].cost = 0.0;
    acc += path.steps[i].cost;
    path.steps[i].accumulated = acc;
  }
  path.total_cost = acc;
  compute_segments(path);
}

enum class Pass { idle, changed, failed };

class Simulator {
 public:
  Simulator(const HeightGrid& truth, const Pose& goal, const PlannerConfig& cfg, const ExecutionOptions& options)
      : truth_(truth), goal_(goal), cfg_(cfg), partial_(options.initial_map != nullptr) {
    if (partial_) {
      const HeightGrid& m = *options.initial_map;
      if (m.width() != truth.width() || m.height() != truth.height() || m.resolution() != truth.resolution() ||
          m.origin().x != truth.origin().x || m.origin().y != truth.origin().y)
        throw ContractError("initial map and ground truth differ in shape");
      sensed_ = m;
    } else {
      sensed_ = truth;
    }
    maps_ = build_levels(sensed_, cfg_);
  }

  ExecutionResult run(const Pose& start, std::size_t max_steps) {
    robot_ = start;
    result_.executed.steps.push_back({start, ManeuverKind::drive, 0.0, 0.0});
    if (sense()) maps_ = build_levels(sensed_, cfg_);
    emit("start", robot_);
    if (!plan_from_robot("initial plan")) return std::move(result_);
    if (max_steps == 0) max_steps = 4 * path_.steps.size() + 200;

    for (;;) {
      if (goal_reached(robot_, goal_, false)) {
        result_.reached_goal = true;
        emit("goal", robot_);
        break;
      }
      if (path_.steps.size() < 2) {
        if (!replan("path ended before the goal")) break;
        continue;
      }
      const Pass pass = refine_windows();
      if (pass == Pass::failed) {
        if (!replan("segment not refineable")) break;
        continue;
      }
      const PathStep next = path_.steps[1];
      if (next.pose.level != Level::l1) {
        result_.all_level1 = false;
        emit("failure", robot_, 0.0, 0.0, "next maneuver is not at Level 1");
        break;
      }
      if (!feasible_cost(pose_cost(maps_, next.pose, cfg_.robot))) {
        if (!replan("next maneuver blocked")) break;
        continue;
      }
      if (step_ >= max_steps) {
        emit("failure", robot_, 0.0, 0.0, "step limit reached");
        break;
      }
      ++step_;
      robot_ = next.pose;
      const double acc = result_.executed.steps.back().accumulated + next.cost;
      result_.executed.steps.push_back({robot_, next.label, next.cost, acc});
      result_.executed.total_cost = acc;
      path_.steps.erase(path_.steps.begin());
      restamp(path_);
      emit("execute", robot_, next.cost, 0.0, to_string(next.label));

      if (sense()) {
        maps_ = build_levels(sensed_, cfg_);
        if (!path_valid() && !replan("map update blocks the path")) break;
      }
    }
    compute_segments(result_.executed);
    return std::move(result_);
  }

 private:
  void emit(const char* kind, const Pose& pose, double original = 0.0, double refined = 0.0,
            std::string detail = {}) {
    result_.events.push_back({kind, step_, pose, original, refined, std::move(detail)});
  }

  // Copies ground truth into the sensed map inside the Level-2 window around
  // the robot. Returns true if any cell changed.
  bool sense() {
    if (!partial_) return false;
    const WorldPoint c = maps_.lattice.world(robot_);
    const double half = 0.5 * cfg_.level2_window;
    const GridIndex lo = sensed_.index_of({c.x - half, c.y - half});
    const GridIndex hi = sensed_.index_of({c.x + half, c.y + half});
    bool changed = false;
    for (int r = std::max(0, lo.row); r <= std::min(sensed_.height() - 1, hi.row); ++r)
      for (int q = std::max(0, lo.col); q <= std::min(sensed_.width() - 1, hi.col); ++q) {
        const GridIndex g{q, r};
        if (!same_value(sensed_[g], truth_[g])) {
          sensed_[g] = truth_[g];
          changed = true;
        }
      }
    return changed;
  }

  // Only the Level-1 part is checked here; coarser steps are caught by their
  // refinement verdict.
  bool path_valid() const {
    for (std::size_t i = 1; i < path_.steps.size() && path_.steps[i].pose.level == Level::l1; ++i)
      if (!feasible_cost(pose_cost(maps_, path_.steps[i].pose, cfg_.robot))) return false;
    return true;
  }

  bool plan_from_robot(const char* reason) {
    try {
      const PlanResult r = plan(maps_, robot_, goal_, cfg_);
      if (!r.found) {
        emit("failure", robot_, 0.0, 0.0, std::string(reason) + ": goal unreachable");
        return false;
      }
      path_ = r.path;
      return true;
    } catch (const ContractError& e) {
      emit("failure", robot_, 0.0, 0.0, std::string(reason) + ": " + e.what());
      return false;
    }
  }

  bool replan(const char* reason) {
    ++result_.replans;
    if (result_.replans > cfg_.max_replans) {
      emit("failure", robot_, 0.0, 0.0, "re-plan bound exceeded");
      return false;
    }
    if (!plan_from_robot(reason)) return false;
    emit("replanned", robot_, 0.0, path_.total_cost, reason);
    return true;
  }

  std::size_t run_end(std::size_t i) const {
    const Level l = path_.steps[i].pose.level;
    std::size_t j = i;
    while (j + 1 < path_.steps.size() && path_.steps[j + 1].pose.level == l) ++j;
    return j;
  }

  std::optional<std::size_t> first_at(Level level) const {
    for (std::size_t i = 1; i < path_.steps.size(); ++i)
      if (path_.steps[i].pose.level == level) return i;
    return std::nullopt;
  }

  void splice(std::size_t first, std::size_t last, const std::vector<PathStep>& replacement) {
    auto it = path_.steps.erase(path_.steps.begin() + static_cast<long>(first),
                                path_.steps.begin() + static_cast<long>(last) + 1);
    path_.steps.insert(it, replacement.begin(), replacement.end());
    restamp(path_);
  }

  // Level-3 steps inside the Level-2 window are refined to Level 2 once the
  // covered part is long enough, the whole run is covered, or the run has
  // reached the Level-1 window.
  Pass refine_l3() {
    const auto first = first_at(Level::l3);
    if (!first) return Pass::idle;
    const std::size_t i = *first;
    const Lattice& lat = maps_.lattice;
    const WorldPoint c = lat.world(robot_);
    if (!in_square(lat, path_.steps[i].pose, c, cfg_.level2_window)) return Pass::idle;
    const std::size_t end = run_end(i);
    std::size_t j = i;
    while (j < end && in_square(lat, path_.steps[j + 1].pose, c, cfg_.level2_window)) ++j;
    const Pose& prev = path_.steps[i - 1].pose;
    const bool ready = j == end || distance(lat, prev, path_.steps[j].pose) >= 0.25 * cfg_.level2_window ||
                       in_square(lat, path_.steps[i].pose, c, cfg_.level1_window);
    if (!ready) return Pass::idle;

    std::vector<Pose> poses;
    double original = 0.0;
    for (std::size_t k = i; k <= j; ++k) {
      poses.push_back(path_.steps[k].pose);
      original += path_.steps[k].cost;
    }
    std::vector<PathStep> out;
    Pose start2 = prev;
    if (prev.level == Level::l1) {
      const Promotion pr = promote_to(maps_, prev, Level::l2, cfg_);
      if (!pr.feasible) {
        emit("not_refineable", path_.steps[j].pose, original, 0.0, to_string(Verdict::endpoint_infeasible));
        return Pass::failed;
      }
      start2 = pr.pose;
      out.push_back({start2, ManeuverKind::level_snap, pr.snap_cost, 0.0});
    }
    const RefineOutcome r = refine_l3_segment(maps_, start2, poses, original, cfg_);
    if (!r.refineable()) {
      emit("not_refineable", path_.steps[j].pose, original, r.refined_cost, to_string(r.verdict));
      return Pass::failed;
    }
    emit("refined", path_.steps[j].pose, original, r.refined_cost, "level 3 to level 2");
    for (std::size_t k = 1; k < r.path.steps.size(); ++k) out.push_back(r.path.steps[k]);
    splice(i, j, out);
    return Pass::changed;
  }

  // Level-2 stepping groups are refined whole: a group ends at a pose with
  // neutral feet that is not a level snap, or at the end of the run.
  Pass refine_l2() {
    const auto first = first_at(Level::l2);
    if (!first) return Pass::idle;
    const std::size_t i = *first;
    const Lattice& lat = maps_.lattice;
    const WorldPoint c = lat.world(robot_);
    if (!in_square(lat, path_.steps[i].pose, c, cfg_.level1_window)) return Pass::idle;
    const std::size_t end = run_end(i);
    std::size_t j = i;
    while (j < end && in_square(lat, path_.steps[j + 1].pose, c, cfg_.level1_window)) ++j;
    const Pose& prev = path_.steps[i - 1].pose;
    const bool ready =
        i == 1 || j == end || distance(lat, prev, path_.steps[j].pose) >= 0.25 * cfg_.level1_window;
    if (!ready) return Pass::idle;
    if (prev.level != Level::l1) throw ContractError("Level-2 run must follow a Level-1 pose");

    std::vector<PathStep> out;
    Pose cur = prev;
    std::size_t k = i;
    std::size_t last = i;
    for (;;) {
      std::vector<Pose> poses;
      double original = 0.0;
      std::size_t e = k;
      for (;; ++e) {
        poses.push_back(path_.steps[e].pose);
        original += path_.steps[e].cost;
        if (e == end || (feet_neutral(path_.steps[e].pose) && path_.steps[e].label != ManeuverKind::level_snap))
          break;
      }
      const RefineOutcome r = refine_l2_segment(maps_, cur, poses, original, cfg_);
      if (!r.refineable()) {
        emit("not_refineable", path_.steps[e].pose, original, r.refined_cost, to_string(r.verdict));
        return Pass::failed;
      }
      emit("refined", path_.steps[e].pose, original, r.refined_cost, "level 2 to level 1");
      for (std::size_t q = 1; q < r.path.steps.size(); ++q) out.push_back(r.path.steps[q]);
      cur = r.path.steps.back().pose;
      last = e;
      if (e >= j || e == end) break;
      k = e + 1;
    }
    splice(i, last, out);
    return Pass::changed;
  }

  Pass refine_windows() {
    Pass any = Pass::idle;
    for (;;) {
      Pass p = refine_l3();
      if (p == Pass::failed) return p;
      const Pass q = refine_l2();
      if (q == Pass::failed) return q;
      if (p == Pass::idle && q == Pass::idle) return any;
      any = Pass::changed;
    }
  }

  const HeightGrid& truth_;
  Pose goal_;
  const PlannerConfig& cfg_;
  bool partial_;
  HeightGrid sensed_;
  LevelMaps maps_;
  Pose robot_{};
  Path path_;
  ExecutionResult result_;
  std::size_t step_ = 0;
};

}  // namespace

ExecutionResult simulate_execution(const HeightGrid& ground_truth, const Pose& start, const Pose& goal,
                                   const PlannerConfig& cfg, const ExecutionOptions& options) {
  cfg.validate();
  if (start.level != Level::l1) throw ContractError("execution starts from a Level-1 pose");
  Simulator sim(ground_truth, goal, cfg, options);
  return sim.run(start, options.max_steps);
}

std::string execution_log_jsonl(const ExecutionResult& result, const Lattice& lattice) {
  std::string out;
  for (const ExecutionEvent& e : result.events) {
    nlohmann::ordered_json j;
    j["event"] = e.kind;
    j["step"] = e.step;
    j["pose"] = format_pose(e.pose, lattice);
    if (e.kind == "execute") j["cost"] = e.original_cost;
    if (e.kind == "refined" || e.kind == "not_refineable") {
      j["original_cost"] = e.original_cost;
      j["refined_cost"] = e.refined_cost;
    }
    if (e.kind == "replanned") j["path_cost"] = e.refined_cost;
    if (!e.detail.empty()) j["detail"] = e.detail;
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace strata
