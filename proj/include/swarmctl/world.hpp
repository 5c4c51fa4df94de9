#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "swarmctl/rng.hpp"
#include "swarmctl/scenario.hpp"
#include "swarmctl/vec2.hpp"

namespace swarmctl {

struct AgentState {
  int id = 0;
  int group = 0;
  Vec2 position;
  Vec2 velocity;
  std::optional<Vec2> goal;
};

struct SearchGrid {
  std::vector<Vec2> points;
  std::vector<double> counters;
  double counter_max = 100.0;
  double reset_radius = 2.0;
};

// Immutable per-step snapshot. All measurements for a step read one of
// these, never partially updated state.
struct WorldView {
  std::vector<AgentState> agents;
  std::optional<SearchGrid> search_grid;
  double time = 0.0;
  int step = 0;
};

inline SearchGrid make_search_grid(const SearchGridConfig& cfg, double map_half_extent) {
  SearchGrid grid;
  grid.counter_max = cfg.counter_max;
  grid.reset_radius = cfg.reset_radius;
  int p = cfg.points_per_side;
  double width = cfg.extent_fraction * 2.0 * map_half_extent;
  double spacing = p > 1 ? width / (p - 1) : 0.0;
  grid.points.reserve(static_cast<std::size_t>(p) * p);
  for (int iy = 0; iy < p; ++iy) {
    for (int ix = 0; ix < p; ++ix) {
      grid.points.push_back({-width / 2.0 + ix * spacing, -width / 2.0 + iy * spacing});
    }
  }
  grid.counters.assign(grid.points.size(), cfg.counter_max);
  return grid;
}

// Initial placement. Collision avoidance puts agents evenly on a ring with
// the antipode as goal; every other task scatters agents uniformly over the
// map. Group labels are assigned round-robin.
inline WorldView init_world(const ScenarioSpec& scenario, std::uint64_t seed) {
  scenario.validate();
  WorldView world;
  world.agents.resize(static_cast<std::size_t>(scenario.n_agents));
  Rng rng(seed);
  for (int i = 0; i < scenario.n_agents; ++i) {
    AgentState& a = world.agents[static_cast<std::size_t>(i)];
    a.id = i;
    a.group = i % scenario.groups;
    if (scenario.task == Task::collision_avoidance) {
      double angle = 2.0 * kPi * i / scenario.n_agents;
      a.position = {scenario.ring_radius * std::cos(angle), scenario.ring_radius * std::sin(angle)};
      a.goal = -a.position;
    } else {
      double x = rng.uniform(-scenario.map_half_extent, scenario.map_half_extent);
      double y = rng.uniform(-scenario.map_half_extent, scenario.map_half_extent);
      a.position = {x, y};
    }
  }
  if (scenario.search_grid) {
    world.search_grid = make_search_grid(*scenario.search_grid, scenario.map_half_extent);
  }
  return world;
}

// Above this population the index switches from a flat scan to a uniform
// bucket grid.
inline constexpr std::size_t kBruteForceLimit = 200;

// Neighbor lookups over one snapshot. Both strategies visit candidates in
// ascending agent index so accumulated sums come out bit-identical.
class NeighborIndex {
 public:
  enum class Mode { automatic, brute, grid };

  NeighborIndex(const std::vector<AgentState>& agents, double cell_size,
                Mode mode = Mode::automatic)
      : agents_(&agents), cell_(cell_size > 0.0 ? cell_size : 1.0) {
    use_grid_ = mode == Mode::grid ||
                (mode == Mode::automatic && agents.size() > kBruteForceLimit);
    if (use_grid_) {
      for (int i = 0; i < static_cast<int>(agents.size()); ++i) {
        cells_[cell_key(agents[static_cast<std::size_t>(i)].position)].push_back(i);
      }
    }
  }

  // Visits every other agent strictly within `radius` of agent `self`,
  // ascending index order, as f(index, distance).
  template <class F>
  void for_each_within(int self, double radius, F&& f) const {
    const auto& agents = *agents_;
    Vec2 p = agents[static_cast<std::size_t>(self)].position;
    if (!use_grid_) {
      for (int j = 0; j < static_cast<int>(agents.size()); ++j) {
        if (j == self) continue;
        double d = dist(p, agents[static_cast<std::size_t>(j)].position);
        if (d < radius) f(j, d);
      }
      return;
    }
    scratch_.clear();
    auto [cx0, cy0] = cell_coords({p.x - radius, p.y - radius});
    auto [cx1, cy1] = cell_coords({p.x + radius, p.y + radius});
    for (std::int32_t cy = cy0; cy <= cy1; ++cy) {
      for (std::int32_t cx = cx0; cx <= cx1; ++cx) {
        auto it = cells_.find(pack(cx, cy));
        if (it == cells_.end()) continue;
        scratch_.insert(scratch_.end(), it->second.begin(), it->second.end());
      }
    }
    std::sort(scratch_.begin(), scratch_.end());
    for (int j : scratch_) {
      if (j == self) continue;
      double d = dist(p, agents[static_cast<std::size_t>(j)].position);
      if (d < radius) f(j, d);
    }
  }

  // Index of the closest other agent strictly within `radius`, or -1.
  // Distance ties resolve to the lowest index.
  int nearest_within(int self, double radius) const {
    int best = -1;
    double best_d = radius;
    for_each_within(self, radius, [&](int j, double d) {
      if (best < 0 || d < best_d) {
        best = j;
        best_d = d;
      }
    });
    return best;
  }

 private:
  std::pair<std::int32_t, std::int32_t> cell_coords(Vec2 p) const {
    return {static_cast<std::int32_t>(std::floor(p.x / cell_)),
            static_cast<std::int32_t>(std::floor(p.y / cell_))};
  }
  std::uint64_t cell_key(Vec2 p) const {
    auto [cx, cy] = cell_coords(p);
    return pack(cx, cy);
  }
  static std::uint64_t pack(std::int32_t cx, std::int32_t cy) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(cx)) << 32) |
           static_cast<std::uint32_t>(cy);
  }

  const std::vector<AgentState>* agents_;
  double cell_;
  bool use_grid_ = false;
  std::unordered_map<std::uint64_t, std::vector<int>> cells_;
  mutable std::vector<int> scratch_;
};

}  // namespace swarmctl
