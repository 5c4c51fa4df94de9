#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "swarmctl/error.hpp"

namespace swarmctl {

enum class Task {
  flocking,
  cohesion_segregation,
  pattern_formation,
  collision_avoidance,
  search,
};

enum class CostMeasure {
  proximity_pairs,      // agent pairs closer than proximity_threshold
  agents_not_at_goal,   // agents with a goal farther than goal_radius from it
  search_counter_sum,   // sum of all grid counters
};

// One signed, weighted contribution to the running cost.
struct CostTerm {
  std::string name;
  int sign = +1;            // +1 penalizes, -1 rewards
  double multiplier = 1.0;  // >= 0
  CostMeasure measure = CostMeasure::agents_not_at_goal;
};

struct SearchGridConfig {
  int points_per_side = 6;
  double extent_fraction = 0.6;  // lattice width as a fraction of map width
  double counter_max = 100.0;
  double counter_rate = 10.0;    // counter units per second
  double reset_radius = 2.0;
};

struct ScenarioSpec {
  Task task = Task::flocking;
  int n_agents = 2;
  int groups = 1;
  double map_half_extent = 50.0;
  double sensing_radius = 4.0;
  double dt = 0.1;
  int horizon_steps = 100;
  double ring_radius = 5.0;  // start ring for the antipodal placement
  double goal_radius = 0.5;
  double proximity_threshold = 1.0;
  std::optional<SearchGridConfig> search_grid;
  std::vector<CostTerm> cost_terms;
  std::array<double, 2> param_bounds{-10.0, 10.0};

  void validate() const;
};

// Collision and search costs count one tick per step; the remaining tasks
// weight each step by dt seconds.
inline bool per_step_cost_ticks(Task t) {
  return t == Task::collision_avoidance || t == Task::search;
}

inline void ScenarioSpec::validate() const {
  if (n_agents < 2) throw SpecError("scenario: n_agents must be >= 2");
  if (groups < 1) throw SpecError("scenario: groups must be >= 1");
  if (groups > n_agents) throw SpecError("scenario: more groups than agents");
  if (!(map_half_extent > 0.0)) throw SpecError("scenario: map_half_extent must be > 0");
  if (!(sensing_radius > 0.0)) throw SpecError("scenario: sensing_radius must be > 0");
  if (!(dt > 0.0)) throw SpecError("scenario: dt must be > 0");
  if (horizon_steps < 1) throw SpecError("scenario: horizon_steps must be >= 1");
  if (!(ring_radius > 0.0)) throw SpecError("scenario: ring_radius must be > 0");
  if (goal_radius < 0.0) throw SpecError("scenario: goal_radius must be >= 0");
  if (proximity_threshold < 0.0) throw SpecError("scenario: proximity_threshold must be >= 0");
  if (!(param_bounds[0] < param_bounds[1])) throw SpecError("scenario: param_bounds must satisfy lo < hi");
  if (task == Task::search && !search_grid) throw SpecError("scenario: search task requires a search_grid");
  if (search_grid) {
    const auto& g = *search_grid;
    if (g.points_per_side < 1) throw SpecError("scenario: search_grid.points_per_side must be >= 1");
    if (!(g.extent_fraction > 0.0) || g.extent_fraction > 1.0)
      throw SpecError("scenario: search_grid.extent_fraction must be in (0, 1]");
    if (!(g.counter_max > 0.0)) throw SpecError("scenario: search_grid.counter_max must be > 0");
    if (g.counter_rate < 0.0) throw SpecError("scenario: search_grid.counter_rate must be >= 0");
    if (g.reset_radius < 0.0) throw SpecError("scenario: search_grid.reset_radius must be >= 0");
  }
  for (const auto& term : cost_terms) {
    if (term.sign != 1 && term.sign != -1)
      throw SpecError("scenario: cost term '" + term.name + "' sign must be +1 or -1");
    if (term.multiplier < 0.0)
      throw SpecError("scenario: cost term '" + term.name + "' multiplier must be >= 0");
  }
}

}  // namespace swarmctl
