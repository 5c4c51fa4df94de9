#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "swarmctl/controller.hpp"
#include "swarmctl/error.hpp"
#include "swarmctl/scenario.hpp"
#include "swarmctl/tasks.hpp"

namespace swarmctl {

inline constexpr int kSchemaVersion = 1;

inline const char* task_name(Task t) {
  switch (t) {
    case Task::flocking: return "flocking";
    case Task::cohesion_segregation: return "cohesion_segregation";
    case Task::pattern_formation: return "pattern_formation";
    case Task::collision_avoidance: return "collision_avoidance";
    case Task::search: return "search";
  }
  return "?";
}

inline const char* measure_name(CostMeasure m) {
  switch (m) {
    case CostMeasure::proximity_pairs: return "proximity_pairs";
    case CostMeasure::agents_not_at_goal: return "agents_not_at_goal";
    case CostMeasure::search_counter_sum: return "search_counter_sum";
  }
  return "?";
}

namespace detail {

inline constexpr Task kAllTasks[] = {Task::flocking, Task::cohesion_segregation,
                                     Task::pattern_formation, Task::collision_avoidance,
                                     Task::search};
inline constexpr CostMeasure kAllMeasures[] = {CostMeasure::proximity_pairs,
                                               CostMeasure::agents_not_at_goal,
                                               CostMeasure::search_counter_sum};
inline constexpr ScalarSource kAllScalarSources[] = {
    ScalarSource::dist_nearest_neighbor, ScalarSource::dist_origin,
    ScalarSource::dist_goal, ScalarSource::count_same_group,
    ScalarSource::count_diff_group, ScalarSource::dist_diff_group_centroid,
    ScalarSource::radial_gap_times_angle, ScalarSource::nearest_search_counter,
    ScalarSource::constant};
inline constexpr VectorSource kAllVectorSources[] = {
    VectorSource::unit_to_nearest_neighbor, VectorSource::unit_to_origin,
    VectorSource::unit_to_goal, VectorSource::unit_to_same_group_centroid,
    VectorSource::unit_to_diff_group_centroid, VectorSource::unit_avg_heading,
    VectorSource::current_velocity, VectorSource::unit_to_nearest_search_location,
    VectorSource::unit_to_counter_weighted_search_centroid};
inline constexpr TransformOp kAllOps[] = {TransformOp::scale, TransformOp::power,
                                          TransformOp::offset};

template <class E, std::size_t N, class NameFn>
E enum_from_string(const E (&all)[N], NameFn name, const std::string& text,
                   const std::string& context) {
  for (E e : all) {
    if (text == name(e)) return e;
  }
  throw ConfigError(context + ": unknown value '" + text + "'");
}

inline const nlohmann::json& need(const nlohmann::json& j, const char* key,
                                  const std::string& label) {
  if (!j.is_object()) throw ConfigError(label + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError(label + ": missing key '" + key + "'");
  return *it;
}

inline double need_double(const nlohmann::json& j, const char* key, const std::string& label) {
  const auto& v = need(j, key, label);
  if (!v.is_number()) throw ConfigError(label + ": key '" + key + "' must be a number");
  return v.get<double>();
}

inline double opt_double(const nlohmann::json& j, const char* key, double fallback,
                         const std::string& label) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return need_double(j, key, label);
}

inline int need_int(const nlohmann::json& j, const char* key, const std::string& label) {
  const auto& v = need(j, key, label);
  if (!v.is_number_integer()) throw ConfigError(label + ": key '" + key + "' must be an integer");
  return v.get<int>();
}

inline int opt_int(const nlohmann::json& j, const char* key, int fallback,
                   const std::string& label) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return need_int(j, key, label);
}

inline std::string need_string(const nlohmann::json& j, const char* key,
                               const std::string& label) {
  const auto& v = need(j, key, label);
  if (!v.is_string()) throw ConfigError(label + ": key '" + key + "' must be a string");
  return v.get<std::string>();
}

inline void check_schema(const nlohmann::json& j, const std::string& label) {
  int version = need_int(j, "schema_version", label);
  if (version != kSchemaVersion)
    throw ConfigError(label + ": unsupported schema_version " + std::to_string(version));
}

}  // namespace detail

inline ScenarioSpec scenario_from_json(const nlohmann::json& j, const std::string& label) {
  using namespace detail;
  check_schema(j, label);
  ScenarioSpec s;
  s.task = enum_from_string(kAllTasks, task_name, need_string(j, "task", label), label + ": task");
  s.n_agents = need_int(j, "n_agents", label);
  s.groups = opt_int(j, "groups", 1, label);
  s.map_half_extent = opt_double(j, "map_half_extent", 50.0, label);
  s.sensing_radius = need_double(j, "sensing_radius", label);
  s.dt = opt_double(j, "dt", 0.1, label);
  s.horizon_steps = need_int(j, "horizon_steps", label);
  s.ring_radius = opt_double(j, "ring_radius", 5.0, label);
  s.goal_radius = opt_double(j, "goal_radius", 0.5, label);
  s.proximity_threshold = opt_double(j, "proximity_threshold", 1.0, label);
  if (j.contains("param_bounds")) {
    const auto& b = j["param_bounds"];
    if (!b.is_array() || b.size() != 2 || !b[0].is_number() || !b[1].is_number())
      throw ConfigError(label + ": param_bounds must be [lo, hi]");
    s.param_bounds = {b[0].get<double>(), b[1].get<double>()};
  }
  if (j.contains("search_grid")) {
    const auto& g = j["search_grid"];
    std::string glabel = label + ": search_grid";
    SearchGridConfig cfg;
    cfg.points_per_side = opt_int(g, "points_per_side", 6, glabel);
    cfg.extent_fraction = opt_double(g, "extent_fraction", 0.6, glabel);
    cfg.counter_max = opt_double(g, "counter_max", 100.0, glabel);
    cfg.counter_rate = opt_double(g, "counter_rate", 10.0, glabel);
    cfg.reset_radius = opt_double(g, "reset_radius", 2.0, glabel);
    s.search_grid = cfg;
  }
  if (j.contains("cost_terms")) {
    const auto& terms = j["cost_terms"];
    if (!terms.is_array()) throw ConfigError(label + ": cost_terms must be an array");
    for (const auto& t : terms) {
      std::string tlabel = label + ": cost_terms";
      CostTerm term;
      term.name = need_string(t, "name", tlabel);
      term.sign = opt_int(t, "sign", 1, tlabel);
      term.multiplier = opt_double(t, "multiplier", 1.0, tlabel);
      term.measure = enum_from_string(kAllMeasures, measure_name,
                                      need_string(t, "measure", tlabel), tlabel + ": measure");
      s.cost_terms.push_back(std::move(term));
    }
  } else {
    s.cost_terms = default_cost_terms(s.task);
  }
  try {
    s.validate();
  } catch (const SpecError& e) {
    throw ConfigError(label + ": " + e.what());
  }
  return s;
}

inline nlohmann::json scenario_to_json(const ScenarioSpec& s) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["task"] = task_name(s.task);
  j["n_agents"] = s.n_agents;
  j["groups"] = s.groups;
  j["map_half_extent"] = s.map_half_extent;
  j["sensing_radius"] = s.sensing_radius;
  j["dt"] = s.dt;
  j["horizon_steps"] = s.horizon_steps;
  j["ring_radius"] = s.ring_radius;
  j["goal_radius"] = s.goal_radius;
  j["proximity_threshold"] = s.proximity_threshold;
  j["param_bounds"] = {s.param_bounds[0], s.param_bounds[1]};
  if (s.search_grid) {
    const auto& g = *s.search_grid;
    j["search_grid"] = {{"points_per_side", g.points_per_side},
                        {"extent_fraction", g.extent_fraction},
                        {"counter_max", g.counter_max},
                        {"counter_rate", g.counter_rate},
                        {"reset_radius", g.reset_radius}};
  }
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : s.cost_terms) {
    terms.push_back({{"name", t.name},
                     {"sign", t.sign},
                     {"multiplier", t.multiplier},
                     {"measure", measure_name(t.measure)}});
  }
  j["cost_terms"] = terms;
  return j;
}

inline ControllerSpec controller_from_json(const nlohmann::json& j, const std::string& label) {
  using namespace detail;
  check_schema(j, label);
  ControllerSpec c;
  c.vmax = need_double(j, "vmax", label);
  const auto& scalars = need(j, "scalars", label);
  if (!scalars.is_array()) throw ConfigError(label + ": scalars must be an array");
  for (const auto& s : scalars) {
    ScalarExpr expr;
    expr.source = enum_from_string(kAllScalarSources,
                                   static_cast<const char* (*)(ScalarSource)>(source_name),
                                   need_string(s, "source", label + ": scalars"),
                                   label + ": scalar source");
    if (s.contains("transform")) {
      const auto& steps = s["transform"];
      if (!steps.is_array()) throw ConfigError(label + ": transform must be an array");
      for (const auto& st : steps) {
        TransformStep step;
        step.op = enum_from_string(kAllOps, op_name, need_string(st, "op", label + ": transform"),
                                   label + ": transform op");
        step.value = need_double(st, "value", label + ": transform");
        expr.transform.push_back(step);
      }
    }
    c.scalar_exprs.push_back(std::move(expr));
  }
  const auto& vectors = need(j, "vectors", label);
  if (!vectors.is_array()) throw ConfigError(label + ": vectors must be an array");
  for (const auto& v : vectors) {
    VectorExpr expr;
    expr.source = enum_from_string(kAllVectorSources,
                                   static_cast<const char* (*)(VectorSource)>(source_name),
                                   need_string(v, "source", label + ": vectors"),
                                   label + ": vector source");
    if (v.contains("orthogonal")) {
      if (!v["orthogonal"].is_boolean())
        throw ConfigError(label + ": vectors: 'orthogonal' must be a boolean");
      expr.rotate_orthogonal = v["orthogonal"].get<bool>();
    }
    c.vector_exprs.push_back(expr);
  }
  const auto& params = need(j, "params", label);
  if (!params.is_array()) throw ConfigError(label + ": params must be an array of rows");
  for (const auto& row : params) {
    if (!row.is_array()) throw ConfigError(label + ": params rows must be arrays");
    std::vector<double> r;
    for (const auto& v : row) {
      if (!v.is_number()) throw ConfigError(label + ": params entries must be numbers");
      r.push_back(v.get<double>());
    }
    c.params.push_back(std::move(r));
  }
  try {
    c.validate();
  } catch (const SpecError& e) {
    throw ConfigError(label + ": " + e.what());
  }
  return c;
}

inline nlohmann::json controller_to_json(const ControllerSpec& c) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["vmax"] = c.vmax;
  nlohmann::json scalars = nlohmann::json::array();
  for (const auto& expr : c.scalar_exprs) {
    nlohmann::json s;
    s["source"] = source_name(expr.source);
    if (!expr.transform.empty()) {
      nlohmann::json steps = nlohmann::json::array();
      for (const auto& st : expr.transform) {
        steps.push_back({{"op", op_name(st.op)}, {"value", st.value}});
      }
      s["transform"] = steps;
    }
    scalars.push_back(std::move(s));
  }
  j["scalars"] = scalars;
  nlohmann::json vectors = nlohmann::json::array();
  for (const auto& expr : c.vector_exprs) {
    nlohmann::json v;
    v["source"] = source_name(expr.source);
    if (expr.rotate_orthogonal) v["orthogonal"] = true;
    vectors.push_back(std::move(v));
  }
  j["vectors"] = vectors;
  j["params"] = c.params;
  return j;
}

namespace detail {

inline nlohmann::json parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open file");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError(path + ": cannot open file for writing");
  out << text;
  if (!out) throw ConfigError(path + ": write failed");
}

}  // namespace detail

inline ScenarioSpec load_scenario(const std::string& path) {
  return scenario_from_json(detail::parse_file(path), path);
}

inline ControllerSpec load_controller(const std::string& path) {
  return controller_from_json(detail::parse_file(path), path);
}

inline void save_json(const nlohmann::json& j, const std::string& path) {
  detail::write_text_file(path, j.dump(2) + "\n");
}

inline void save_scenario(const ScenarioSpec& s, const std::string& path) {
  save_json(scenario_to_json(s), path);
}

inline void save_controller(const ControllerSpec& c, const std::string& path) {
  save_json(controller_to_json(c), path);
}

}  // namespace swarmctl
