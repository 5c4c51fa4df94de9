#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "swarmctl/error.hpp"
#include "swarmctl/scenario.hpp"
#include "swarmctl/vec2.hpp"
#include "swarmctl/world.hpp"

namespace swarmctl {

enum class ScalarSource {
  dist_nearest_neighbor,
  dist_origin,
  dist_goal,
  count_same_group,
  count_diff_group,
  dist_diff_group_centroid,
  radial_gap_times_angle,
  nearest_search_counter,
  constant,
};

enum class TransformOp { scale, power, offset };

struct TransformStep {
  TransformOp op = TransformOp::scale;
  double value = 1.0;  // power exponents must be integral
};

struct ScalarExpr {
  ScalarSource source = ScalarSource::constant;
  std::vector<TransformStep> transform;  // applied left to right
};

enum class VectorSource {
  unit_to_nearest_neighbor,
  unit_to_origin,
  unit_to_goal,
  unit_to_same_group_centroid,
  unit_to_diff_group_centroid,
  unit_avg_heading,
  current_velocity,
  unit_to_nearest_search_location,
  unit_to_counter_weighted_search_centroid,
};

struct VectorExpr {
  VectorSource source = VectorSource::current_velocity;
  bool rotate_orthogonal = false;  // quarter turn CCW after normalization
};

struct MeasurementFrame {
  std::vector<double> scalars;
  std::vector<Vec2> vectors;
};

// Magnitude floor applied to the running value right before a negative
// power, so inversions stay finite when agents coincide.
inline constexpr double kSingularityClamp = 1e-3;

inline const char* source_name(ScalarSource s) {
  switch (s) {
    case ScalarSource::dist_nearest_neighbor: return "dist_nearest_neighbor";
    case ScalarSource::dist_origin: return "dist_origin";
    case ScalarSource::dist_goal: return "dist_goal";
    case ScalarSource::count_same_group: return "count_same_group";
    case ScalarSource::count_diff_group: return "count_diff_group";
    case ScalarSource::dist_diff_group_centroid: return "dist_diff_group_centroid";
    case ScalarSource::radial_gap_times_angle: return "radial_gap_times_angle";
    case ScalarSource::nearest_search_counter: return "nearest_search_counter";
    case ScalarSource::constant: return "constant";
  }
  return "?";
}

inline const char* source_name(VectorSource s) {
  switch (s) {
    case VectorSource::unit_to_nearest_neighbor: return "unit_to_nearest_neighbor";
    case VectorSource::unit_to_origin: return "unit_to_origin";
    case VectorSource::unit_to_goal: return "unit_to_goal";
    case VectorSource::unit_to_same_group_centroid: return "unit_to_same_group_centroid";
    case VectorSource::unit_to_diff_group_centroid: return "unit_to_diff_group_centroid";
    case VectorSource::unit_avg_heading: return "unit_avg_heading";
    case VectorSource::current_velocity: return "current_velocity";
    case VectorSource::unit_to_nearest_search_location: return "unit_to_nearest_search_location";
    case VectorSource::unit_to_counter_weighted_search_centroid:
      return "unit_to_counter_weighted_search_centroid";
  }
  return "?";
}

inline const char* op_name(TransformOp op) {
  switch (op) {
    case TransformOp::scale: return "scale";
    case TransformOp::power: return "power";
    case TransformOp::offset: return "offset";
  }
  return "?";
}

namespace detail {

// Exact exponentiation by squaring; negative exponents invert the result.
inline double ipow(double base, int exp) {
  if (exp < 0) return 1.0 / ipow(base, -exp);
  double result = 1.0;
  double factor = base;
  for (int e = exp; e > 0; e >>= 1) {
    if (e & 1) result *= factor;
    factor *= factor;
  }
  return result;
}

inline int nearest_grid_point(const SearchGrid& grid, Vec2 p) {
  int best = -1;
  double best_d = 0.0;
  for (int k = 0; k < static_cast<int>(grid.points.size()); ++k) {
    double d = dist(p, grid.points[static_cast<std::size_t>(k)]);
    if (best < 0 || d < best_d) {
      best = k;
      best_d = d;
    }
  }
  return best;
}

}  // namespace detail

inline double apply_transforms(double value, const std::vector<TransformStep>& steps,
                               const char* label) {
  for (const auto& step : steps) {
    switch (step.op) {
      case TransformOp::scale:
        value *= step.value;
        break;
      case TransformOp::offset:
        value += step.value;
        break;
      case TransformOp::power: {
        int exp = static_cast<int>(step.value);
        if (static_cast<double>(exp) != step.value)
          throw SpecError(std::string("transform on ") + label + ": power exponent must be an integer");
        if (exp < 0 && std::abs(value) < kSingularityClamp) {
          value = value < 0.0 ? -kSingularityClamp : kSingularityClamp;
        }
        value = detail::ipow(value, exp);
        break;
      }
    }
  }
  if (!std::isfinite(value))
    throw EvalError(std::string("scalar ") + label + ": transform produced a non-finite value");
  return value;
}

inline double extract_scalar(const ScalarExpr& expr, int agent_index, const WorldView& world,
                             const ScenarioSpec& scenario, const NeighborIndex& index) {
  const AgentState& self = world.agents[static_cast<std::size_t>(agent_index)];
  const double radius = scenario.sensing_radius;
  double raw = 0.0;
  switch (expr.source) {
    case ScalarSource::dist_nearest_neighbor: {
      int j = index.nearest_within(agent_index, radius);
      raw = j < 0 ? radius : dist(self.position, world.agents[static_cast<std::size_t>(j)].position);
      break;
    }
    case ScalarSource::dist_origin:
      raw = self.position.norm();
      break;
    case ScalarSource::dist_goal:
      raw = self.goal ? dist(self.position, *self.goal) : 0.0;
      break;
    case ScalarSource::count_same_group: {
      int n = 0;
      index.for_each_within(agent_index, radius, [&](int j, double) {
        if (world.agents[static_cast<std::size_t>(j)].group == self.group) ++n;
      });
      raw = n;
      break;
    }
    case ScalarSource::count_diff_group: {
      int n = 0;
      index.for_each_within(agent_index, radius, [&](int j, double) {
        if (world.agents[static_cast<std::size_t>(j)].group != self.group) ++n;
      });
      raw = n;
      break;
    }
    case ScalarSource::dist_diff_group_centroid: {
      Vec2 sum;
      int n = 0;
      index.for_each_within(agent_index, radius, [&](int j, double) {
        const AgentState& other = world.agents[static_cast<std::size_t>(j)];
        if (other.group != self.group) {
          sum += other.position;
          ++n;
        }
      });
      raw = n == 0 ? radius : dist(self.position, sum / n);
      break;
    }
    case ScalarSource::radial_gap_times_angle: {
      int j = index.nearest_within(agent_index, radius);
      if (j < 0) {
        raw = 0.0;
        break;
      }
      const Vec2 other = world.agents[static_cast<std::size_t>(j)].position;
      double gap = self.position.norm() - other.norm();
      double theta = 0.0;
      if (self.position.norm() >= kNormEps && other.norm() >= kNormEps) {
        theta = std::atan2(self.position.cross(other), self.position.dot(other));
        if (theta <= -kPi) theta += 2.0 * kPi;  // keep the range (-pi, pi]
      }
      raw = gap * theta;
      break;
    }
    case ScalarSource::nearest_search_counter: {
      if (!world.search_grid || world.search_grid->points.empty()) {
        raw = 0.0;
        break;
      }
      int k = detail::nearest_grid_point(*world.search_grid, self.position);
      raw = world.search_grid->counters[static_cast<std::size_t>(k)];
      break;
    }
    case ScalarSource::constant:
      raw = 1.0;
      break;
  }
  return apply_transforms(raw, expr.transform, source_name(expr.source));
}

inline Vec2 extract_vector(const VectorExpr& expr, int agent_index, const WorldView& world,
                           const ScenarioSpec& scenario, const NeighborIndex& index) {
  const AgentState& self = world.agents[static_cast<std::size_t>(agent_index)];
  const double radius = scenario.sensing_radius;
  Vec2 v;
  switch (expr.source) {
    case VectorSource::unit_to_nearest_neighbor: {
      int j = index.nearest_within(agent_index, radius);
      v = j < 0 ? Vec2{}
                : (world.agents[static_cast<std::size_t>(j)].position - self.position).normalized();
      break;
    }
    case VectorSource::unit_to_origin:
      v = (-self.position).normalized();
      break;
    case VectorSource::unit_to_goal:
      v = self.goal ? (*self.goal - self.position).normalized() : Vec2{};
      break;
    case VectorSource::unit_to_same_group_centroid:
    case VectorSource::unit_to_diff_group_centroid: {
      const bool same = expr.source == VectorSource::unit_to_same_group_centroid;
      Vec2 sum;
      int n = 0;
      index.for_each_within(agent_index, radius, [&](int j, double) {
        const AgentState& other = world.agents[static_cast<std::size_t>(j)];
        if ((other.group == self.group) == same) {
          sum += other.position;
          ++n;
        }
      });
      v = n == 0 ? Vec2{} : (sum / n - self.position).normalized();
      break;
    }
    case VectorSource::unit_avg_heading: {
      Vec2 sum;
      int n = 0;
      index.for_each_within(agent_index, radius, [&](int j, double) {
        sum += world.agents[static_cast<std::size_t>(j)].velocity;
        ++n;
      });
      v = n == 0 ? Vec2{} : (sum / n).normalized();
      break;
    }
    case VectorSource::current_velocity:
      v = self.velocity;  // deliberately not normalized
      break;
    case VectorSource::unit_to_nearest_search_location: {
      if (!world.search_grid || world.search_grid->points.empty()) break;
      int k = detail::nearest_grid_point(*world.search_grid, self.position);
      v = (world.search_grid->points[static_cast<std::size_t>(k)] - self.position).normalized();
      break;
    }
    case VectorSource::unit_to_counter_weighted_search_centroid: {
      if (!world.search_grid) break;
      const SearchGrid& grid = *world.search_grid;
      Vec2 weighted;
      double total = 0.0;
      for (std::size_t k = 0; k < grid.points.size(); ++k) {
        if (dist(self.position, grid.points[k]) >= radius) continue;
        weighted += grid.points[k] * grid.counters[k];
        total += grid.counters[k];
      }
      v = total < kNormEps ? Vec2{} : (weighted / total - self.position).normalized();
      break;
    }
  }
  if (expr.rotate_orthogonal) v = v.rot90();
  if (!v.finite())
    throw EvalError(std::string("vector ") + source_name(expr.source) + ": non-finite value");
  return v;
}

inline MeasurementFrame build_frame(const std::vector<ScalarExpr>& scalars,
                                    const std::vector<VectorExpr>& vectors, int agent_index,
                                    const WorldView& world, const ScenarioSpec& scenario,
                                    const NeighborIndex& index) {
  MeasurementFrame frame;
  frame.scalars.reserve(scalars.size());
  frame.vectors.reserve(vectors.size());
  for (const auto& expr : scalars)
    frame.scalars.push_back(extract_scalar(expr, agent_index, world, scenario, index));
  for (const auto& expr : vectors)
    frame.vectors.push_back(extract_vector(expr, agent_index, world, scenario, index));
  return frame;
}

// Convenience overloads that build the neighbor index on the spot. The
// simulation loop builds one shared index per step instead.
inline double extract_scalar(const ScalarExpr& expr, int agent_index, const WorldView& world,
                             const ScenarioSpec& scenario) {
  NeighborIndex index(world.agents, scenario.sensing_radius);
  return extract_scalar(expr, agent_index, world, scenario, index);
}

inline Vec2 extract_vector(const VectorExpr& expr, int agent_index, const WorldView& world,
                           const ScenarioSpec& scenario) {
  NeighborIndex index(world.agents, scenario.sensing_radius);
  return extract_vector(expr, agent_index, world, scenario, index);
}

inline MeasurementFrame build_frame(const std::vector<ScalarExpr>& scalars,
                                    const std::vector<VectorExpr>& vectors, int agent_index,
                                    const WorldView& world, const ScenarioSpec& scenario) {
  NeighborIndex index(world.agents, scenario.sensing_radius);
  return build_frame(scalars, vectors, agent_index, world, scenario, index);
}

}  // namespace swarmctl
