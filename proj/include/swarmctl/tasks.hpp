#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "swarmctl/scenario.hpp"
#include "swarmctl/sim.hpp"

namespace swarmctl {

struct CostReport {
  double total = 0.0;
  std::map<std::string, double> per_term;
  std::vector<double> per_step;
};

// Per-step metric p_i for one cost term.
inline double measure_value(CostMeasure measure, const WorldView& world,
                            const ScenarioSpec& scenario) {
  switch (measure) {
    case CostMeasure::proximity_pairs: {
      int pairs = 0;
      for (std::size_t i = 0; i < world.agents.size(); ++i) {
        for (std::size_t j = i + 1; j < world.agents.size(); ++j) {
          if (dist(world.agents[i].position, world.agents[j].position) <
              scenario.proximity_threshold)
            ++pairs;
        }
      }
      return pairs;
    }
    case CostMeasure::agents_not_at_goal: {
      int n = 0;
      for (const AgentState& a : world.agents) {
        if (a.goal && dist(a.position, *a.goal) > scenario.goal_radius) ++n;
      }
      return n;
    }
    case CostMeasure::search_counter_sum: {
      if (!world.search_grid) return 0.0;
      double sum = 0.0;
      for (double c : world.search_grid->counters) sum += c;
      return sum;
    }
  }
  return 0.0;
}

// Accumulates sum_t (sum_i sign_i * K_i * p_i(t)) * tick over the recorded
// steps, where the tick is 1 for per-step tasks and dt seconds otherwise.
inline CostReport accumulate_cost(const Trajectory& traj, const ScenarioSpec& scenario) {
  CostReport report;
  const double tick = per_step_cost_ticks(scenario.task) ? 1.0 : scenario.dt;
  for (const auto& term : scenario.cost_terms) report.per_term[term.name] = 0.0;
  report.per_step.reserve(traj.steps.size());
  for (const WorldView& world : traj.steps) {
    double step_cost = 0.0;
    for (const auto& term : scenario.cost_terms) {
      double c = term.sign * term.multiplier * measure_value(term.measure, world, scenario) * tick;
      report.per_term[term.name] += c;
      step_cost += c;
    }
    report.per_step.push_back(step_cost);
    report.total += step_cost;
  }
  return report;
}

inline std::vector<CostTerm> collision_cost_terms(double proximity_multiplier = 5.0) {
  return {
      {"proximity", +1, proximity_multiplier, CostMeasure::proximity_pairs},
      {"not_at_goal", +1, 1.0, CostMeasure::agents_not_at_goal},
  };
}

inline std::vector<CostTerm> search_cost_terms() {
  return {{"stale_counters", +1, 1.0, CostMeasure::search_counter_sum}};
}

inline std::vector<CostTerm> default_cost_terms(Task task) {
  switch (task) {
    case Task::collision_avoidance:
      return collision_cost_terms();
    case Task::search:
      return search_cost_terms();
    default:
      return {};
  }
}

namespace detail {

// |mean of unit velocities|; stationary agents contribute a zero vector.
inline double alignment_order(const WorldView& world) {
  if (world.agents.empty()) return 0.0;
  Vec2 sum;
  for (const AgentState& a : world.agents) sum += a.velocity.normalized();
  return (sum / static_cast<double>(world.agents.size())).norm();
}

inline double circular_std(const std::vector<double>& angles) {
  if (angles.empty()) return 0.0;
  double cs = 0.0, sn = 0.0;
  for (double t : angles) {
    cs += std::cos(t);
    sn += std::sin(t);
  }
  double r = std::sqrt(cs * cs + sn * sn) / angles.size();
  if (r <= 0.0) return std::sqrt(-2.0 * std::log(1e-12));
  if (r >= 1.0) return 0.0;
  return std::sqrt(-2.0 * std::log(r));
}

}  // namespace detail

// Scalar summary of the final state (plus over-the-run extrema) used by the
// reporting layer and the behavior checks.
inline std::map<std::string, double> behavior_metrics(const Trajectory& traj,
                                                      const ScenarioSpec& scenario) {
  std::map<std::string, double> metrics;
  const WorldView& final_world = traj.steps.empty() ? traj.initial : traj.steps.back();
  const auto& agents = final_world.agents;
  const auto n = agents.size();
  if (n == 0) return metrics;

  metrics["alignment_order_parameter"] = detail::alignment_order(final_world);

  std::map<int, Vec2> centroid_sum;
  std::map<int, int> group_count;
  for (const AgentState& a : agents) {
    centroid_sum[a.group] += a.position;
    group_count[a.group] += 1;
  }
  double mean_to_centroid = 0.0;
  for (const AgentState& a : agents) {
    mean_to_centroid += dist(a.position, centroid_sum[a.group] / group_count[a.group]);
  }
  metrics["mean_dist_to_group_centroid"] = mean_to_centroid / static_cast<double>(n);

  if (group_count.size() > 1) {
    double intra_sum = 0.0;
    long intra_pairs = 0;
    std::map<std::pair<int, int>, std::pair<double, long>> inter;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double d = dist(agents[i].position, agents[j].position);
        if (agents[i].group == agents[j].group) {
          intra_sum += d;
          ++intra_pairs;
        } else {
          auto key = std::minmax(agents[i].group, agents[j].group);
          auto& cell = inter[{key.first, key.second}];
          cell.first += d;
          cell.second += 1;
        }
      }
    }
    if (intra_pairs > 0) metrics["intra_group_mean_dist"] = intra_sum / intra_pairs;
    double inter_sum = 0.0;
    long inter_pairs = 0;
    double min_pair_mean = 0.0;
    bool first = true;
    for (const auto& [key, cell] : inter) {
      double mean = cell.first / cell.second;
      inter_sum += cell.first;
      inter_pairs += cell.second;
      if (first || mean < min_pair_mean) min_pair_mean = mean;
      first = false;
    }
    if (inter_pairs > 0) {
      metrics["inter_group_mean_dist"] = inter_sum / inter_pairs;
      metrics["min_inter_group_mean_dist"] = min_pair_mean;
    }
  }

  if (scenario.task == Task::pattern_formation && n > 0) {
    // Chains are connected components of the within-sensing-radius graph;
    // dispersion is the mean circular stddev of member bearings.
    std::vector<int> parent(n);
    for (std::size_t i = 0; i < n; ++i) parent[i] = static_cast<int>(i);
    std::function<int(int)> find = [&](int a) {
      while (parent[static_cast<std::size_t>(a)] != a) {
        parent[static_cast<std::size_t>(a)] =
            parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
        a = parent[static_cast<std::size_t>(a)];
      }
      return a;
    };
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (dist(agents[i].position, agents[j].position) < scenario.sensing_radius) {
          parent[static_cast<std::size_t>(find(static_cast<int>(i)))] =
              find(static_cast<int>(j));
        }
      }
    }
    std::map<int, std::vector<double>> chains;
    for (std::size_t i = 0; i < n; ++i) {
      if (agents[i].position.norm() < kNormEps) continue;
      chains[find(static_cast<int>(i))].push_back(
          std::atan2(agents[i].position.y, agents[i].position.x));
    }
    double dispersion = 0.0;
    int chain_count = 0;
    for (const auto& [root, angles] : chains) {
      if (angles.size() < 2) continue;
      dispersion += detail::circular_std(angles);
      ++chain_count;
    }
    metrics["chain_count"] = chain_count;
    if (chain_count > 0) metrics["chain_angle_dispersion"] = dispersion / chain_count;
  }

  int in_bounds = 0;
  for (const AgentState& a : agents) {
    if (std::abs(a.position.x) <= scenario.map_half_extent &&
        std::abs(a.position.y) <= scenario.map_half_extent)
      ++in_bounds;
  }
  metrics["fraction_in_bounds"] = static_cast<double>(in_bounds) / static_cast<double>(n);

  double max_from_origin = 0.0;
  auto scan = [&](const WorldView& w) {
    for (const AgentState& a : w.agents) max_from_origin = std::max(max_from_origin, a.position.norm());
  };
  scan(traj.initial);
  for (const WorldView& w : traj.steps) scan(w);
  metrics["max_dist_from_origin"] = max_from_origin;

  if (n > 1) {
    double min_pair = 0.0;
    bool first = true;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double d = dist(agents[i].position, agents[j].position);
        if (first || d < min_pair) min_pair = d;
        first = false;
      }
    }
    metrics["min_pairwise_dist_final"] = min_pair;
  }
  return metrics;
}

}  // namespace swarmctl
