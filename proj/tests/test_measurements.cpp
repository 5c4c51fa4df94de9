#include "swarmctl/measurements.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "swarmctl/rng.hpp"

using namespace swarmctl;

namespace {

ScenarioSpec basic_scenario(double sensing = 4.0) {
  ScenarioSpec s;
  s.task = Task::flocking;
  s.n_agents = 2;
  s.sensing_radius = sensing;
  s.map_half_extent = 50.0;
  return s;
}

WorldView world_with(std::vector<AgentState> agents) {
  WorldView w;
  for (std::size_t i = 0; i < agents.size(); ++i) agents[i].id = static_cast<int>(i);
  w.agents = std::move(agents);
  return w;
}

ScalarExpr scalar(ScalarSource src, std::vector<TransformStep> steps = {}) {
  return {src, std::move(steps)};
}

}  // namespace

TEST(Transforms, AppliedLeftToRight) {
  // (x * 2 + 1)^2 with x = 3 -> 49
  std::vector<TransformStep> steps = {
      {TransformOp::scale, 2.0}, {TransformOp::offset, 1.0}, {TransformOp::power, 2.0}};
  EXPECT_DOUBLE_EQ(apply_transforms(3.0, steps, "test"), 49.0);
}

TEST(Transforms, NegativePowerExact) {
  std::vector<TransformStep> steps = {{TransformOp::power, -3.0}};
  EXPECT_EQ(apply_transforms(2.0, steps, "test"), 0.125);
}

TEST(Transforms, ScaleThenSixthPower) {
  std::vector<TransformStep> steps = {{TransformOp::scale, 0.02}, {TransformOp::power, 6.0}};
  EXPECT_NEAR(apply_transforms(50.0, steps, "test"), 1.0, 1e-12);
  EXPECT_NEAR(apply_transforms(25.0, steps, "test"), std::pow(0.5, 6), 1e-12);
}

TEST(Transforms, SingularityClampBeforeNegativePower) {
  std::vector<TransformStep> inv = {{TransformOp::power, -1.0}};
  EXPECT_DOUBLE_EQ(apply_transforms(0.0, inv, "test"), 1000.0);
  EXPECT_DOUBLE_EQ(apply_transforms(1e-9, inv, "test"), 1000.0);
  EXPECT_DOUBLE_EQ(apply_transforms(-1e-9, inv, "test"), -1000.0);
  // above the clamp the inversion is untouched
  EXPECT_DOUBLE_EQ(apply_transforms(0.5, inv, "test"), 2.0);
  // the clamp does not apply to positive powers
  std::vector<TransformStep> sq = {{TransformOp::power, 2.0}};
  EXPECT_EQ(apply_transforms(0.0, sq, "test"), 0.0);
}

TEST(Transforms, ClampBoundsInverseCube) {
  std::vector<TransformStep> steps = {{TransformOp::power, -3.0}};
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    double d = rng.uniform(0.0, 0.01);
    double v = apply_transforms(d, steps, "test");
    EXPECT_LE(std::abs(v), 1.0000000001e9);
  }
}

TEST(Transforms, IntegerExponentRequired) {
  std::vector<TransformStep> steps = {{TransformOp::power, 2.5}};
  EXPECT_THROW(apply_transforms(3.0, steps, "test"), SpecError);
}

TEST(Transforms, NonFiniteResultThrows) {
  std::vector<TransformStep> steps = {{TransformOp::power, 9.0}, {TransformOp::power, 9.0}};
  EXPECT_THROW(apply_transforms(1e100, steps, "test"), EvalError);
}

TEST(ScalarSources, ConstantIsAlwaysOne) {
  WorldView w = world_with({AgentState{}, AgentState{}});
  ScenarioSpec s = basic_scenario();
  EXPECT_EQ(extract_scalar(scalar(ScalarSource::constant), 0, w, s), 1.0);
}

TEST(ScalarSources, NearestNeighborDistance) {
  WorldView w = world_with({AgentState{}, AgentState{}});
  w.agents[1].position = {3.0, 4.0};
  ScenarioSpec s = basic_scenario(10.0);
  EXPECT_EQ(extract_scalar(scalar(ScalarSource::dist_nearest_neighbor), 0, w, s), 5.0);
}

TEST(ScalarSources, NearestNeighborFallbackIsSensingRadius) {
  WorldView w = world_with({AgentState{}, AgentState{}});
  w.agents[1].position = {30.0, 0.0};
  ScenarioSpec s = basic_scenario(4.0);
  EXPECT_EQ(extract_scalar(scalar(ScalarSource::dist_nearest_neighbor), 0, w, s), 4.0);
}

TEST(ScalarSources, DistOriginAndGoal) {
  WorldView w = world_with({AgentState{}, AgentState{}});
  w.agents[0].position = {3.0, 4.0};
  ScenarioSpec s = basic_scenario();
  EXPECT_EQ(extract_scalar(scalar(ScalarSource::dist_origin), 0, w, s), 5.0);
  // no goal set: zero
  EXPECT_EQ(extract_scalar(scalar(ScalarSource::dist_goal), 0, w, s), 0.0);
  w.agents[0].goal = Vec2{3.0, 0.0};
  EXPECT_EQ(extract_scalar(scalar(ScalarSource::dist_goal), 0, w, s), 4.0);
}

TEST(ScalarSources, GroupCountsStrictlyWithinRadiusExcludeSelf) {
  std::vector<AgentState> agents(5);
  agents[0].position = {0.0, 0.0};
  agents[0].group = 0;
  agents[1].position = {1.0, 0.0};
  agents[1].group = 0;
  agents[2].position = {0.0, 1.0};
  agents[2].group = 1;
  agents[3].position = {4.0, 0.0};  // on the boundary: excluded
  agents[3].group = 0;
  agents[4].position = {9.0, 0.0};  // outside
  agents[4].group = 1;
  WorldView w = world_with(std::move(agents));
  ScenarioSpec s = basic_scenario(4.0);
  EXPECT_EQ(extract_scalar(scalar(ScalarSource::count_same_group), 0, w, s), 1.0);
  EXPECT_EQ(extract_scalar(scalar(ScalarSource::count_diff_group), 0, w, s), 1.0);
}

TEST(ScalarSources, DiffGroupCentroidDistanceWithFallback) {
  std::vector<AgentState> agents(3);
  agents[0].position = {0.0, 0.0};
  agents[0].group = 0;
  agents[1].position = {2.0, 0.0};
  agents[1].group = 1;
  agents[2].position = {0.0, 2.0};
  agents[2].group = 1;
  WorldView w = world_with(std::move(agents));
  ScenarioSpec s = basic_scenario(10.0);
  // centroid of (2,0) and (0,2) is (1,1)
  EXPECT_DOUBLE_EQ(extract_scalar(scalar(ScalarSource::dist_diff_group_centroid), 0, w, s),
                   std::sqrt(2.0));
  // agent 1 has no different-group neighbor in radius 1.5
  s.sensing_radius = 1.5;
  EXPECT_EQ(extract_scalar(scalar(ScalarSource::dist_diff_group_centroid), 1, w, s), 1.5);
}

TEST(ScalarSources, RadialGapTimesAngle) {
  std::vector<AgentState> agents(2);
  agents[0].position = {2.0, 0.0};
  agents[1].position = {0.0, 1.0};
  WorldView w = world_with(std::move(agents));
  ScenarioSpec s = basic_scenario(10.0);
  EXPECT_DOUBLE_EQ(extract_scalar(scalar(ScalarSource::radial_gap_times_angle), 0, w, s),
                   kPi / 2.0);
  // from the neighbor's view the gap and angle both flip sign
  EXPECT_DOUBLE_EQ(extract_scalar(scalar(ScalarSource::radial_gap_times_angle), 1, w, s),
                   kPi / 2.0);
}

TEST(ScalarSources, RadialAngleWrapsIntoHalfOpenRange) {
  std::vector<AgentState> agents(2);
  double a0 = 3.0 * kPi / 4.0;
  double a1 = -3.0 * kPi / 4.0;
  agents[0].position = {2.0 * std::cos(a0), 2.0 * std::sin(a0)};
  agents[1].position = {std::cos(a1), std::sin(a1)};
  WorldView w = world_with(std::move(agents));
  ScenarioSpec s = basic_scenario(10.0);
  // raw angle difference is -3pi/2, which wraps to +pi/2
  double expected = (2.0 - 1.0) * (kPi / 2.0);
  EXPECT_NEAR(extract_scalar(scalar(ScalarSource::radial_gap_times_angle), 0, w, s), expected,
              1e-12);
}

TEST(ScalarSources, RadialGapNoNeighborIsZero) {
  std::vector<AgentState> agents(2);
  agents[0].position = {2.0, 0.0};
  agents[1].position = {50.0, 0.0};
  WorldView w = world_with(std::move(agents));
  ScenarioSpec s = basic_scenario(4.0);
  EXPECT_EQ(extract_scalar(scalar(ScalarSource::radial_gap_times_angle), 0, w, s), 0.0);
}

TEST(ScalarSources, NearestSearchCounter) {
  WorldView w = world_with({AgentState{}, AgentState{}});
  w.agents[0].position = {-8.0, -8.5};
  ScenarioSpec s = basic_scenario(10.0);
  EXPECT_EQ(extract_scalar(scalar(ScalarSource::nearest_search_counter), 0, w, s), 0.0);
  SearchGridConfig cfg;
  w.search_grid = make_search_grid(cfg, 15.0);
  w.search_grid->counters[0] = 37.0;  // point (-9, -9)
  EXPECT_EQ(extract_scalar(scalar(ScalarSource::nearest_search_counter), 0, w, s), 37.0);
}

TEST(VectorSources, UnitToNearestNeighborAndFallback) {
  WorldView w = world_with({AgentState{}, AgentState{}});
  w.agents[1].position = {3.0, 4.0};
  ScenarioSpec s = basic_scenario(10.0);
  Vec2 v = extract_vector({VectorSource::unit_to_nearest_neighbor, false}, 0, w, s);
  EXPECT_DOUBLE_EQ(v.x, 0.6);
  EXPECT_DOUBLE_EQ(v.y, 0.8);
  s.sensing_radius = 2.0;
  v = extract_vector({VectorSource::unit_to_nearest_neighbor, false}, 0, w, s);
  EXPECT_EQ(v.x, 0.0);
  EXPECT_EQ(v.y, 0.0);
}

TEST(VectorSources, OrthogonalRotatesAfterNormalization) {
  WorldView w = world_with({AgentState{}, AgentState{}});
  w.agents[1].position = {2.0, 0.0};
  ScenarioSpec s = basic_scenario(10.0);
  Vec2 v = extract_vector({VectorSource::unit_to_nearest_neighbor, true}, 0, w, s);
  EXPECT_DOUBLE_EQ(v.x, 0.0);
  EXPECT_DOUBLE_EQ(v.y, 1.0);
}

TEST(VectorSources, UnitToOriginDegenerateAtCenter) {
  WorldView w = world_with({AgentState{}, AgentState{}});
  w.agents[0].position = {0.0, 3.0};
  ScenarioSpec s = basic_scenario();
  Vec2 v = extract_vector({VectorSource::unit_to_origin, false}, 0, w, s);
  EXPECT_DOUBLE_EQ(v.y, -1.0);
  w.agents[0].position = {0.0, 0.0};
  v = extract_vector({VectorSource::unit_to_origin, false}, 0, w, s);
  EXPECT_EQ(v.x, 0.0);
  EXPECT_EQ(v.y, 0.0);
}

TEST(VectorSources, GoalVectorZeroWithoutGoal) {
  WorldView w = world_with({AgentState{}, AgentState{}});
  ScenarioSpec s = basic_scenario();
  Vec2 v = extract_vector({VectorSource::unit_to_goal, false}, 0, w, s);
  EXPECT_EQ(v.x, 0.0);
  EXPECT_EQ(v.y, 0.0);
  w.agents[0].goal = Vec2{0.0, -2.0};
  v = extract_vector({VectorSource::unit_to_goal, false}, 0, w, s);
  EXPECT_DOUBLE_EQ(v.y, -1.0);
}

TEST(VectorSources, CentroidVectors) {
  std::vector<AgentState> agents(4);
  agents[0].position = {0.0, 0.0};
  agents[0].group = 0;
  agents[1].position = {2.0, 0.0};
  agents[1].group = 0;
  agents[2].position = {0.0, 2.0};
  agents[2].group = 0;
  agents[3].position = {-2.0, 0.0};
  agents[3].group = 1;
  WorldView w = world_with(std::move(agents));
  ScenarioSpec s = basic_scenario(10.0);
  Vec2 same = extract_vector({VectorSource::unit_to_same_group_centroid, false}, 0, w, s);
  EXPECT_DOUBLE_EQ(same.x, std::sqrt(0.5));
  EXPECT_DOUBLE_EQ(same.y, std::sqrt(0.5));
  Vec2 diff = extract_vector({VectorSource::unit_to_diff_group_centroid, false}, 0, w, s);
  EXPECT_DOUBLE_EQ(diff.x, -1.0);
  EXPECT_DOUBLE_EQ(diff.y, 0.0);
}

TEST(VectorSources, AvgHeadingIsNormalizedMeanOfNeighborVelocities) {
  std::vector<AgentState> agents(3);
  agents[0].position = {0.0, 0.0};
  agents[1].position = {1.0, 0.0};
  agents[1].velocity = {0.0, 3.0};
  agents[2].position = {0.0, 1.0};
  agents[2].velocity = {0.0, 1.0};
  WorldView w = world_with(std::move(agents));
  ScenarioSpec s = basic_scenario(4.0);
  Vec2 v = extract_vector({VectorSource::unit_avg_heading, false}, 0, w, s);
  EXPECT_DOUBLE_EQ(v.x, 0.0);
  EXPECT_DOUBLE_EQ(v.y, 1.0);
}

TEST(VectorSources, CurrentVelocityNotNormalized) {
  WorldView w = world_with({AgentState{}, AgentState{}});
  w.agents[0].velocity = {3.0, -4.0};
  ScenarioSpec s = basic_scenario();
  Vec2 v = extract_vector({VectorSource::current_velocity, false}, 0, w, s);
  EXPECT_EQ(v.x, 3.0);
  EXPECT_EQ(v.y, -4.0);
}

TEST(VectorSources, SearchVectors) {
  WorldView w = world_with({AgentState{}, AgentState{}});
  w.agents[0].position = {-8.0, -9.0};
  ScenarioSpec s = basic_scenario(10.0);
  // no grid: zero vectors
  Vec2 v = extract_vector({VectorSource::unit_to_nearest_search_location, false}, 0, w, s);
  EXPECT_EQ(v.x, 0.0);
  v = extract_vector({VectorSource::unit_to_counter_weighted_search_centroid, false}, 0, w, s);
  EXPECT_EQ(v.x, 0.0);

  SearchGridConfig cfg;
  w.search_grid = make_search_grid(cfg, 15.0);
  v = extract_vector({VectorSource::unit_to_nearest_search_location, false}, 0, w, s);
  EXPECT_DOUBLE_EQ(v.x, -1.0);  // nearest point is (-9, -9)
  EXPECT_DOUBLE_EQ(v.y, 0.0);

  // all counters zero nearby: degenerate weighted centroid
  for (double& c : w.search_grid->counters) c = 0.0;
  v = extract_vector({VectorSource::unit_to_counter_weighted_search_centroid, false}, 0, w, s);
  EXPECT_EQ(v.x, 0.0);
  EXPECT_EQ(v.y, 0.0);

  // weight mass on a single point pulls straight at it
  w.search_grid->counters[1] = 50.0;  // point (-5.4, -9)
  v = extract_vector({VectorSource::unit_to_counter_weighted_search_centroid, false}, 0, w, s);
  EXPECT_DOUBLE_EQ(v.x, 1.0);
  EXPECT_DOUBLE_EQ(v.y, 0.0);
}

TEST(Frames, FlockingExampleFrame) {
  // agent at the origin, one neighbor at (1, 0) moving with velocity (0, 1)
  std::vector<AgentState> agents(2);
  agents[0].position = {0.0, 0.0};
  agents[1].position = {1.0, 0.0};
  agents[1].velocity = {0.0, 1.0};
  WorldView w = world_with(std::move(agents));
  ScenarioSpec s = basic_scenario(4.0);

  std::vector<ScalarExpr> scalars = {
      scalar(ScalarSource::dist_nearest_neighbor, {{TransformOp::power, -3.0}}),
      scalar(ScalarSource::dist_origin, {{TransformOp::scale, 0.02}, {TransformOp::power, 6.0}}),
      scalar(ScalarSource::constant),
  };
  std::vector<VectorExpr> vectors = {
      {VectorSource::unit_to_nearest_neighbor, false},
      {VectorSource::unit_to_origin, false},
      {VectorSource::unit_to_same_group_centroid, false},
      {VectorSource::unit_avg_heading, false},
      {VectorSource::current_velocity, false},
  };
  MeasurementFrame frame = build_frame(scalars, vectors, 0, w, s);
  ASSERT_EQ(frame.scalars.size(), 3u);
  EXPECT_DOUBLE_EQ(frame.scalars[0], 1.0);
  EXPECT_DOUBLE_EQ(frame.scalars[1], 0.0);
  EXPECT_DOUBLE_EQ(frame.scalars[2], 1.0);
  ASSERT_EQ(frame.vectors.size(), 5u);
  EXPECT_DOUBLE_EQ(frame.vectors[0].x, 1.0);   // to the neighbor
  EXPECT_EQ(frame.vectors[1].x, 0.0);          // at the origin already
  EXPECT_DOUBLE_EQ(frame.vectors[2].x, 1.0);   // centroid of the one neighbor
  EXPECT_DOUBLE_EQ(frame.vectors[3].y, 1.0);   // neighbor heading
  EXPECT_EQ(frame.vectors[4].x, 0.0);          // own velocity
}

TEST(Frames, UnitVectorMagnitudesAreZeroOrOne) {
  ScenarioSpec s = basic_scenario(6.0);
  s.n_agents = 12;
  s.groups = 3;
  Rng rng(31);
  std::vector<VectorExpr> vectors;
  for (VectorSource src :
       {VectorSource::unit_to_nearest_neighbor, VectorSource::unit_to_origin,
        VectorSource::unit_to_goal, VectorSource::unit_to_same_group_centroid,
        VectorSource::unit_to_diff_group_centroid, VectorSource::unit_avg_heading,
        VectorSource::unit_to_nearest_search_location,
        VectorSource::unit_to_counter_weighted_search_centroid}) {
    vectors.push_back({src, false});
    vectors.push_back({src, true});
  }
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<AgentState> agents(12);
    for (auto& a : agents) {
      a.position = {rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0)};
      a.velocity = {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
      a.group = rng.uniform_int(0, 2);
      if (rng.uniform() < 0.5) a.goal = Vec2{rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0)};
    }
    WorldView w = world_with(std::move(agents));
    if (trial % 2 == 0) {
      w.search_grid = make_search_grid(SearchGridConfig{}, 10.0);
    }
    for (int i = 0; i < 12; ++i) {
      for (const auto& expr : vectors) {
        double n = extract_vector(expr, i, w, s).norm();
        EXPECT_TRUE(std::abs(n - 1.0) < 1e-9 || n < 1e-9)
            << "magnitude " << n << " from " << source_name(expr.source);
      }
    }
  }
}

TEST(Frames, RelabelingInvariance) {
  // reversing agent order must leave each agent's measurements unchanged
  ScenarioSpec s = basic_scenario(8.0);
  Rng rng(77);
  std::vector<AgentState> agents(9);
  for (auto& a : agents) {
    a.position = {rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0)};
    a.velocity = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    a.group = rng.uniform_int(0, 1);
  }
  WorldView w = world_with(std::move(agents));
  WorldView r = w;
  std::reverse(r.agents.begin(), r.agents.end());

  std::vector<ScalarExpr> scalars = {
      scalar(ScalarSource::dist_nearest_neighbor), scalar(ScalarSource::count_same_group),
      scalar(ScalarSource::dist_diff_group_centroid), scalar(ScalarSource::radial_gap_times_angle)};
  for (int i = 0; i < 9; ++i) {
    int ri = 8 - i;
    for (const auto& expr : scalars) {
      EXPECT_NEAR(extract_scalar(expr, i, w, s), extract_scalar(expr, ri, r, s), 1e-9)
          << source_name(expr.source);
    }
  }
}

TEST(Frames, DeterministicRepeatedExtraction) {
  ScenarioSpec s = basic_scenario(5.0);
  Rng rng(123);
  std::vector<AgentState> agents(20);
  for (auto& a : agents) {
    a.position = {rng.uniform(-20.0, 20.0), rng.uniform(-20.0, 20.0)};
    a.velocity = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
  }
  WorldView w = world_with(std::move(agents));
  ScalarExpr expr = scalar(ScalarSource::dist_nearest_neighbor, {{TransformOp::power, -3.0}});
  for (int i = 0; i < 20; ++i) {
    double a = extract_scalar(expr, i, w, s);
    double b = extract_scalar(expr, i, w, s);
    EXPECT_EQ(a, b);
  }
}
