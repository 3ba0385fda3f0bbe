#include "strata/config_io.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "strata/scenario.hpp"

namespace strata {

namespace {

struct Field {
  std::string key;
  std::function<std::string(const PlannerConfig&)> get;
  std::function<void(PlannerConfig&, const std::string&)> set;
};

std::string format_number(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

double parse_number(const std::string& key, const std::string& text) {
  double v = 0.0;
  const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
  if (r.ec != std::errc() || r.ptr != text.data() + text.size())
    throw ContractError("config key '" + key + "': '" + text + "' is not a number");
  return v;
}

long long parse_integer(const std::string& key, const std::string& text) {
  long long v = 0;
  const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
  if (r.ec != std::errc() || r.ptr != text.data() + text.size())
    throw ContractError("config key '" + key + "': '" + text + "' is not an integer");
  return v;
}

template <class Access>
Field real(std::string key, Access access) {
  return {key, [access](const PlannerConfig& c) { return format_number(access(const_cast<PlannerConfig&>(c))); },
          [access, key](PlannerConfig& c, const std::string& v) { access(c) = parse_number(key, v); }};
}

template <class Access>
Field integer(std::string key, Access access) {
  return {key, [access](const PlannerConfig& c) { return std::to_string(access(const_cast<PlannerConfig&>(c))); },
          [access, key](PlannerConfig& c, const std::string& v) {
            const long long n = parse_integer(key, v);
            if (n < 0) throw ContractError("config key '" + key + "' must be non-negative");
            access(c) = static_cast<std::remove_reference_t<decltype(access(c))>>(n);
          }};
}

#define STRATA_REAL(key, member) real(key, [](PlannerConfig& c) -> double& { return c.member; })
#define STRATA_INT(key, member) integer(key, [](PlannerConfig& c) -> auto& { return c.member; })

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back(STRATA_REAL("robot.base_length", robot.base_length));
    f.push_back(STRATA_REAL("robot.base_width", robot.base_width));
    f.push_back(STRATA_REAL("robot.foot_area_length", robot.foot_area_length));
    f.push_back(STRATA_REAL("robot.foot_area_width", robot.foot_area_width));
    f.push_back(STRATA_REAL("robot.lateral_offset", robot.lateral_offset));
    f.push_back(STRATA_REAL("robot.neutral_longitudinal", robot.neutral_longitudinal));
    f.push_back(STRATA_REAL("robot.sagittal_travel", robot.sagittal_travel));
    f.push_back(STRATA_REAL("robot.contact_area_length", robot.contact_area_length));
    f.push_back(STRATA_REAL("robot.contact_area_width", robot.contact_area_width));
    f.push_back(STRATA_REAL("robot.base_clearance", robot.base_clearance));
    f.push_back(STRATA_REAL("costs.foot_cost_slope", costs.foot_cost_slope));
    f.push_back(STRATA_REAL("costs.pair_cost_slope", costs.pair_cost_slope));
    f.push_back(STRATA_REAL("costs.drive_limit_l1", costs.drive_limit_l1));
    f.push_back(STRATA_REAL("costs.drive_limit_l2", costs.drive_limit_l2));
    f.push_back(STRATA_REAL("costs.flat_limit", costs.flat_limit));
    f.push_back(STRATA_REAL("costs.rough_limit", costs.rough_limit));
    f.push_back(STRATA_REAL("costs.flat_cost", costs.flat_cost));
    f.push_back(STRATA_REAL("costs.rough_cost", costs.rough_cost));
    f.push_back(STRATA_REAL("costs.step_cell_base", costs.step_cell_base));
    f.push_back(STRATA_REAL("costs.step_cell_slope", costs.step_cell_slope));
    f.push_back(STRATA_REAL("costs.max_step_length", costs.max_step_length));
    f.push_back(STRATA_REAL("costs.max_step_height", costs.max_step_height));
    f.push_back(STRATA_REAL("costs.ambiguous_resultant", costs.ambiguous_resultant));
    f.push_back(STRATA_REAL("costs.unknown_area_fraction", costs.unknown_area_fraction));
    f.push_back(STRATA_REAL("costs.slope_penalty", costs.slope_penalty));
    f.push_back(STRATA_REAL("costs.step_effort", costs.step_effort));
    f.push_back(STRATA_REAL("costs.step_height_effort", costs.step_height_effort));
    f.push_back(STRATA_REAL("costs.pair_step_effort", costs.pair_step_effort));
    f.push_back(STRATA_REAL("costs.foot_shift_factor", costs.foot_shift_factor));
    f.push_back(STRATA_REAL("costs.misalignment_penalty", costs.misalignment_penalty));
    f.push_back(STRATA_REAL("costs.misalignment_tolerance", costs.misalignment_tolerance));
    f.push_back(STRATA_REAL("costs.base_shift", costs.base_shift));
    f.push_back(STRATA_REAL("costs.foot_shift", costs.foot_shift));
    f.push_back(STRATA_INT("costs.landing_options_l1", costs.landing_options_l1));
    f.push_back(STRATA_INT("costs.landing_options_l2", costs.landing_options_l2));
    f.push_back(STRATA_REAL("costs.obstacle_lookahead", costs.obstacle_lookahead));
    f.push_back(STRATA_REAL("level1_window", level1_window));
    f.push_back(STRATA_REAL("level2_window", level2_window));
    f.push_back({"weights",
                 [](const PlannerConfig& c) {
                   std::string s;
                   for (std::size_t i = 0; i < c.weights.size(); ++i) s += (i ? ", " : "") + format_number(c.weights[i]);
                   return s;
                 },
                 [](PlannerConfig& c, const std::string& v) {
                   std::vector<double> w;
                   std::stringstream in(v);
                   std::string item;
                   while (std::getline(in, item, ',')) {
                     const auto b = item.find_first_not_of(" \t");
                     const auto e = item.find_last_not_of(" \t");
                     if (b == std::string::npos) throw ContractError("config key 'weights': empty entry");
                     w.push_back(parse_number("weights", item.substr(b, e - b + 1)));
                   }
                   c.weights = w;
                 }});
    f.push_back({"heuristic", [](const PlannerConfig& c) { return to_string(c.heuristic); },
                 [](PlannerConfig& c, const std::string& v) { c.heuristic = parse_heuristic(v); }});
    f.push_back({"mode", [](const PlannerConfig& c) { return to_string(c.mode); },
                 [](PlannerConfig& c, const std::string& v) { c.mode = parse_level_mode(v); }});
    f.push_back(STRATA_REAL("time_budget", time_budget));
    f.push_back(STRATA_INT("max_expansions", max_expansions));
    f.push_back(STRATA_REAL("refine_tolerance", refine_tolerance));
    f.push_back(STRATA_REAL("refine_weight", refine_weight));
    f.push_back(STRATA_REAL("calibration_tolerance", calibration_tolerance));
    f.push_back(STRATA_INT("max_replans", max_replans));
    return f;
  }();
  return table;
}

#undef STRATA_REAL
#undef STRATA_INT

const Field& field(const std::string& key) {
  for (const Field& f : fields())
    if (f.key == key) return f;
  throw ContractError("unknown config key '" + key + "'");
}

}  // namespace

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const Field& f : fields()) keys.push_back(f.key);
  return keys;
}

void set_config_value(PlannerConfig& cfg, const std::string& key, const std::string& value) {
  field(key).set(cfg, value);
}

std::string get_config_value(const PlannerConfig& cfg, const std::string& key) { return field(key).get(cfg); }

std::string format_config(const PlannerConfig& cfg) {
  std::string out;
  for (const Field& f : fields()) out += f.key + " = " + f.get(cfg) + "\n";
  return out;
}

PlannerConfig parse_config(const std::string& text) {
  std::istringstream in(text);
  PlannerConfig cfg;
  for (const auto& [k, v] : parse_key_values(in)) set_config_value(cfg, k, v);
  cfg.validate();
  return cfg;
}

PlannerConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ContractError("cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace strata
