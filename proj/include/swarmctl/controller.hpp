#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "swarmctl/error.hpp"
#include "swarmctl/measurements.hpp"

namespace swarmctl {

// Linear control law: an m x n parameter matrix maps n measured scalars to
// m coefficients, and the control velocity is the coefficient-weighted sum
// of the m measured vectors, speed-clamped to vmax.
struct ControllerSpec {
  std::vector<std::vector<double>> params;  // rows index vectors, columns index scalars
  std::vector<ScalarExpr> scalar_exprs;
  std::vector<VectorExpr> vector_exprs;
  double vmax = 5.0;

  int n_scalars() const { return static_cast<int>(scalar_exprs.size()); }
  int n_vectors() const { return static_cast<int>(vector_exprs.size()); }

  void validate() const {
    if (!(vmax > 0.0) || !std::isfinite(vmax)) throw SpecError("controller: vmax must be positive");
    if (params.size() != vector_exprs.size())
      throw SpecError("controller: params must have one row per vector expression");
    for (const auto& row : params) {
      if (row.size() != scalar_exprs.size())
        throw SpecError("controller: every params row must have one column per scalar expression");
      for (double p : row) {
        if (!std::isfinite(p)) throw SpecError("controller: params must be finite");
      }
    }
    for (const auto& expr : scalar_exprs) {
      for (const auto& step : expr.transform) {
        if (step.op == TransformOp::power &&
            static_cast<double>(static_cast<int>(step.value)) != step.value)
          throw SpecError(std::string("controller: power exponent on ") + source_name(expr.source) +
                          " must be an integer");
        if (!std::isfinite(step.value))
          throw SpecError("controller: transform values must be finite");
      }
    }
  }
};

struct ControlOutput {
  Vec2 velocity;                     // after the speed clamp
  std::vector<double> coefficients;  // pre-clamp, one per vector expression
};

inline ControlOutput evaluate(const ControllerSpec& spec, const MeasurementFrame& frame) {
  if (static_cast<int>(frame.scalars.size()) != spec.n_scalars() ||
      static_cast<int>(frame.vectors.size()) != spec.n_vectors())
    throw SpecError("controller: frame dimensions do not match the spec");
  ControlOutput out;
  out.coefficients.resize(frame.vectors.size(), 0.0);
  Vec2 v;
  for (std::size_t j = 0; j < frame.vectors.size(); ++j) {
    double c = 0.0;
    for (std::size_t i = 0; i < frame.scalars.size(); ++i) {
      c += spec.params[j][i] * frame.scalars[i];
    }
    out.coefficients[j] = c;
    v += c * frame.vectors[j];
  }
  if (!v.finite()) throw EvalError("controller: non-finite control velocity");
  double speed = v.norm();
  out.velocity = speed > spec.vmax ? v * (spec.vmax / speed) : v;
  return out;
}

// Row-major view of the parameter matrix, for optimizers.
inline std::vector<double> flatten_params(const ControllerSpec& spec) {
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(spec.n_vectors()) * spec.n_scalars());
  for (const auto& row : spec.params) flat.insert(flat.end(), row.begin(), row.end());
  return flat;
}

inline ControllerSpec with_params(const ControllerSpec& spec, std::span<const double> flat) {
  const auto m = static_cast<std::size_t>(spec.n_vectors());
  const auto n = static_cast<std::size_t>(spec.n_scalars());
  if (flat.size() != m * n)
    throw SpecError("controller: expected " + std::to_string(m * n) + " parameters, got " +
                    std::to_string(flat.size()));
  ControllerSpec out = spec;
  out.params.assign(m, std::vector<double>(n, 0.0));
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < n; ++i) out.params[j][i] = flat[j * n + i];
  }
  return out;
}

inline MeasurementFrame build_frame(const ControllerSpec& spec, int agent_index,
                                    const WorldView& world, const ScenarioSpec& scenario,
                                    const NeighborIndex& index) {
  return build_frame(spec.scalar_exprs, spec.vector_exprs, agent_index, world, scenario, index);
}

inline MeasurementFrame build_frame(const ControllerSpec& spec, int agent_index,
                                    const WorldView& world, const ScenarioSpec& scenario) {
  return build_frame(spec.scalar_exprs, spec.vector_exprs, agent_index, world, scenario);
}

}  // namespace swarmctl
