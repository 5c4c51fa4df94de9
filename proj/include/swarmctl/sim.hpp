#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "swarmctl/controller.hpp"
#include "swarmctl/error.hpp"
#include "swarmctl/scenario.hpp"
#include "swarmctl/world.hpp"

namespace swarmctl {

// Snapshots recorded after each step; `initial` is the step-0 state.
struct Trajectory {
  WorldView initial;
  std::vector<WorldView> steps;
};

// One synchronous step: every agent's control is computed from the same
// pre-step snapshot, then positions advance by explicit Euler. Agents
// within goal_radius of their goal hold still.
inline WorldView step(const WorldView& world, const ControllerSpec& spec,
                      const ScenarioSpec& scenario) {
  WorldView next = world;
  NeighborIndex index(world.agents, scenario.sensing_radius);
  for (int i = 0; i < static_cast<int>(world.agents.size()); ++i) {
    const AgentState& agent = world.agents[static_cast<std::size_t>(i)];
    Vec2 v;
    try {
      MeasurementFrame frame = build_frame(spec, i, world, scenario, index);
      v = evaluate(spec, frame).velocity;
    } catch (const EvalError& e) {
      throw SimError("agent " + std::to_string(agent.id) + " at step " +
                     std::to_string(world.step + 1) + ": " + e.what());
    }
    if (agent.goal && dist(agent.position, *agent.goal) <= scenario.goal_radius) {
      v = {0.0, 0.0};
    }
    AgentState& out = next.agents[static_cast<std::size_t>(i)];
    out.velocity = v;
    out.position = agent.position + v * scenario.dt;
  }
  if (next.search_grid) {
    SearchGrid& grid = *next.search_grid;
    double rate = scenario.search_grid ? scenario.search_grid->counter_rate : 0.0;
    for (std::size_t k = 0; k < grid.points.size(); ++k) {
      double c = std::min(grid.counters[k] + rate * scenario.dt, grid.counter_max);
      for (const AgentState& a : next.agents) {
        if (dist(a.position, grid.points[k]) <= grid.reset_radius) {
          c = 0.0;
          break;
        }
      }
      grid.counters[k] = c;
    }
  }
  next.step = world.step + 1;
  next.time = next.step * scenario.dt;
  return next;
}

using StepObserver = std::function<void(const WorldView&)>;

inline Trajectory run(const ScenarioSpec& scenario, const ControllerSpec& spec,
                      std::uint64_t seed, int horizon_steps,
                      const StepObserver& observer = {}) {
  if (horizon_steps < 1) throw SpecError("run: horizon_steps must be >= 1");
  spec.validate();
  Trajectory traj;
  traj.initial = init_world(scenario, seed);
  traj.steps.reserve(static_cast<std::size_t>(horizon_steps));
  WorldView world = traj.initial;
  for (int t = 0; t < horizon_steps; ++t) {
    world = step(world, spec, scenario);
    traj.steps.push_back(world);
    if (observer) observer(world);
  }
  return traj;
}

}  // namespace swarmctl
