#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <thread>
#include <vector>

#include "swarmctl/controller.hpp"
#include "swarmctl/error.hpp"
#include "swarmctl/gp.hpp"
#include "swarmctl/rng.hpp"
#include "swarmctl/scenario.hpp"
#include "swarmctl/sim.hpp"
#include "swarmctl/tasks.hpp"

namespace swarmctl {

struct SearchSpace {
  std::vector<std::array<double, 2>> bounds;  // [lo, hi) per dimension

  int dims() const { return static_cast<int>(bounds.size()); }

  double diagonal() const {
    double s = 0.0;
    for (const auto& b : bounds) s += (b[1] - b[0]) * (b[1] - b[0]);
    return std::sqrt(s);
  }

  void validate() const {
    if (bounds.empty()) throw SpecError("search space: no dimensions");
    for (const auto& b : bounds) {
      if (!(b[0] < b[1])) throw SpecError("search space: bounds must satisfy lo < hi");
    }
  }

  std::vector<double> clip(std::vector<double> x) const {
    for (std::size_t d = 0; d < bounds.size(); ++d) {
      x[d] = std::clamp(x[d], bounds[d][0], bounds[d][1]);
    }
    return x;
  }
};

inline SearchSpace uniform_space(int dims, double lo, double hi) {
  SearchSpace space;
  space.bounds.assign(static_cast<std::size_t>(dims), {lo, hi});
  return space;
}

struct Evaluation {
  std::vector<double> params;
  double cost = 0.0;
};

struct BOCampaign {
  SearchSpace space;
  int budget = 0;
  int n_init = 0;
  std::vector<Evaluation> history;         // in evaluation order
  std::vector<double> incumbent_trace;     // best cost after each evaluation

  // Best evaluation so far; cost ties resolve to the earliest.
  const Evaluation& incumbent() const {
    if (history.empty()) throw SpecError("campaign: no evaluations yet");
    std::size_t best = 0;
    for (std::size_t i = 1; i < history.size(); ++i) {
      if (history[i].cost < history[best].cost) best = i;
    }
    return history[best];
  }
};

namespace detail {

inline double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) * 0.3989422804014326779399460599343818684;
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / 1.4142135623730950488016887242097); }

inline int nth_prime(int n) {
  static const int table[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31,  37,  41,  43,  47, 53,
                              59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131,
                              137, 139, 149, 151, 157, 163, 167, 173};
  if (n < static_cast<int>(sizeof(table) / sizeof(table[0]))) return table[n];
  int candidate = table[sizeof(table) / sizeof(table[0]) - 1];
  int found = static_cast<int>(sizeof(table) / sizeof(table[0])) - 1;
  while (found < n) {
    ++candidate;
    bool prime = true;
    for (int p = 2; p * p <= candidate; ++p) {
      if (candidate % p == 0) {
        prime = false;
        break;
      }
    }
    if (prime) ++found;
  }
  return candidate;
}

// Radical-inverse (van der Corput) value of `index` in the given base.
inline double radical_inverse(std::uint64_t index, int base) {
  double inv_base = 1.0 / base;
  double factor = inv_base;
  double result = 0.0;
  while (index > 0) {
    result += static_cast<double>(index % static_cast<std::uint64_t>(base)) * factor;
    index /= static_cast<std::uint64_t>(base);
    factor *= inv_base;
  }
  return result;
}

inline std::vector<double> halton_point(std::uint64_t index, const SearchSpace& space) {
  std::vector<double> x(static_cast<std::size_t>(space.dims()));
  for (int d = 0; d < space.dims(); ++d) {
    double u = radical_inverse(index, nth_prime(d));
    x[static_cast<std::size_t>(d)] =
        space.bounds[static_cast<std::size_t>(d)][0] +
        u * (space.bounds[static_cast<std::size_t>(d)][1] - space.bounds[static_cast<std::size_t>(d)][0]);
  }
  return x;
}

}  // namespace detail

// Expected improvement below `incumbent_cost` (minimization). With zero
// predictive deviation this degenerates to max(incumbent - mean, 0).
inline double expected_improvement(const GaussianProcessModel& model, std::span<const double> x,
                                   double incumbent_cost) {
  GpPrediction p = gp_predict(model, x);
  double delta = incumbent_cost - p.mean;
  if (p.std < 1e-15) return std::max(delta, 0.0);
  double z = delta / p.std;
  double ei = delta * detail::normal_cdf(z) + p.std * detail::normal_pdf(z);
  return std::max(ei, 0.0);
}

// One stratum per sample per dimension, with independent permutations.
inline std::vector<std::vector<double>> latin_hypercube(const SearchSpace& space, int n, Rng& rng) {
  space.validate();
  if (n < 1) throw SpecError("latin_hypercube: need n >= 1");
  std::vector<std::vector<double>> pts(static_cast<std::size_t>(n),
                                       std::vector<double>(static_cast<std::size_t>(space.dims())));
  for (int d = 0; d < space.dims(); ++d) {
    std::vector<int> strata(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) strata[static_cast<std::size_t>(i)] = i;
    shuffle(strata, rng);
    const auto [lo, hi] = space.bounds[static_cast<std::size_t>(d)];
    for (int i = 0; i < n; ++i) {
      double u = (strata[static_cast<std::size_t>(i)] + rng.uniform()) / n;
      pts[static_cast<std::size_t>(i)][static_cast<std::size_t>(d)] = lo + (hi - lo) * u;
    }
  }
  return pts;
}

// Picks the EI argmax over a deterministic candidate sweep: 2048 Halton
// points, 64 perturbations of the incumbent, then 50 coordinate-descent
// sweeps that halve the step whenever a full sweep fails to improve.
inline std::vector<double> propose_next(const BOCampaign& campaign,
                                        const GaussianProcessModel& model, Rng& rng) {
  campaign.space.validate();
  const int d = campaign.space.dims();
  const double incumbent_cost = campaign.incumbent().cost;
  const std::vector<double>& incumbent = campaign.incumbent().params;

  std::vector<double> best_x;
  double best_ei = -1.0;
  auto consider = [&](std::vector<double> x) {
    double ei = expected_improvement(model, x, incumbent_cost);
    if (ei > best_ei) {
      best_ei = ei;
      best_x = std::move(x);
    }
  };

  std::uint64_t offset = rng.next_u64() % 100000 + 1;
  for (int i = 0; i < 2048; ++i) {
    consider(detail::halton_point(offset + static_cast<std::uint64_t>(i), campaign.space));
  }

  constexpr std::array<double, 3> kSigmas = {0.01, 0.03, 0.1};
  for (int i = 0; i < 64; ++i) {
    double sigma = kSigmas[static_cast<std::size_t>(i % 3)];
    std::vector<double> x = incumbent;
    for (int dd = 0; dd < d; ++dd) {
      double range = campaign.space.bounds[static_cast<std::size_t>(dd)][1] -
                     campaign.space.bounds[static_cast<std::size_t>(dd)][0];
      x[static_cast<std::size_t>(dd)] += sigma * range * rng.normal();
    }
    consider(campaign.space.clip(std::move(x)));
  }

  std::vector<double> x = best_x;
  double ei_here = best_ei;
  double step_frac = 0.02;
  for (int sweep = 0; sweep < 50; ++sweep) {
    bool improved = false;
    for (int dd = 0; dd < d; ++dd) {
      const auto [lo, hi] = campaign.space.bounds[static_cast<std::size_t>(dd)];
      double delta = step_frac * (hi - lo);
      for (double sign : {1.0, -1.0}) {
        std::vector<double> trial = x;
        trial[static_cast<std::size_t>(dd)] =
            std::clamp(trial[static_cast<std::size_t>(dd)] + sign * delta, lo, hi);
        double ei = expected_improvement(model, trial, incumbent_cost);
        if (ei > ei_here) {
          ei_here = ei;
          x = std::move(trial);
          improved = true;
        }
      }
    }
    if (!improved) step_frac *= 0.5;
  }
  return x;
}

struct BOOptions {
  KernelType kernel = KernelType::matern52;
  double length_scale_fraction = 0.2;  // of the space diagonal
  double noise_variance = 0.0;
  int refit_interval = 10;
  double failure_cost = 1e9;
};

using Objective = std::function<double(std::span<const double>)>;

namespace detail {

inline double safe_eval(const Objective& objective, std::span<const double> x,
                        double failure_cost) {
  try {
    double c = objective(x);
    return std::isfinite(c) ? c : failure_cost;
  } catch (const std::exception&) {
    return failure_cost;
  }
}

// Bounded golden-section search for the isotropic length scale, maximizing
// the log marginal likelihood in log space.
inline double refit_length_scale(const std::vector<std::vector<double>>& x,
                                 const std::vector<double>& y, const KernelConfig& base,
                                 double noise_variance, double diag) {
  auto lml_at = [&](double log_l) {
    KernelConfig k = base;
    k.length_scales = {std::exp(log_l)};
    try {
      return gp_fit(x, y, k, noise_variance).log_marginal_likelihood();
    } catch (const ModelError&) {
      return -std::numeric_limits<double>::infinity();
    }
  };
  double lo = std::log(0.02 * diag), hi = std::log(1.0 * diag);
  const double gr = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - gr * (b - a), dd = a + gr * (b - a);
  double fc = lml_at(c), fd = lml_at(dd);
  for (int it = 0; it < 40; ++it) {
    if (fc > fd) {
      b = dd;
      dd = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = lml_at(c);
    } else {
      a = c;
      c = dd;
      fc = fd;
      dd = a + gr * (b - a);
      fd = lml_at(dd);
    }
  }
  return std::exp(0.5 * (a + b));
}

}  // namespace detail

// Budget-limited Bayesian optimization: Latin hypercube start, then
// EI-guided proposals from a GP surrogate refit on every evaluation, with
// an isotropic length-scale MLE refresh every `refit_interval` guided
// steps. Objective failures and non-finite costs score `failure_cost`.
inline BOCampaign run_bo(const Objective& objective, const SearchSpace& space, int budget,
                         int n_init, std::uint64_t seed, const BOOptions& options = {}) {
  space.validate();
  if (n_init < 2) throw SpecError("run_bo: n_init must be >= 2");
  if (budget <= n_init) throw SpecError("run_bo: budget must exceed n_init");

  BOCampaign campaign;
  campaign.space = space;
  campaign.budget = budget;
  campaign.n_init = n_init;

  Rng rng(seed);
  auto record = [&](std::vector<double> x) {
    double cost = detail::safe_eval(objective, x, options.failure_cost);
    campaign.history.push_back({std::move(x), cost});
    double best = campaign.incumbent_trace.empty()
                      ? cost
                      : std::min(cost, campaign.incumbent_trace.back());
    campaign.incumbent_trace.push_back(best);
  };

  for (auto& x : latin_hypercube(space, n_init, rng)) record(std::move(x));

  KernelConfig kernel;
  kernel.type = options.kernel;
  kernel.signal_variance = 1.0;
  kernel.length_scales = {options.length_scale_fraction * space.diagonal()};

  std::vector<std::vector<double>> xs;
  std::vector<double> ys;
  while (static_cast<int>(campaign.history.size()) < budget) {
    xs.clear();
    ys.clear();
    for (const auto& e : campaign.history) {
      xs.push_back(e.params);
      ys.push_back(e.cost);
    }
    const int guided = static_cast<int>(campaign.history.size()) - n_init;
    if (options.refit_interval > 0 && guided % options.refit_interval == 0) {
      kernel.length_scales = {detail::refit_length_scale(xs, ys, kernel, options.noise_variance,
                                                         space.diagonal())};
    }
    std::vector<double> x;
    try {
      GaussianProcessModel model = gp_fit(xs, ys, kernel, options.noise_variance);
      x = propose_next(campaign, model, rng);
    } catch (const ModelError&) {
      x.resize(static_cast<std::size_t>(space.dims()));
      for (int d = 0; d < space.dims(); ++d) {
        x[static_cast<std::size_t>(d)] =
            rng.uniform(space.bounds[static_cast<std::size_t>(d)][0],
                        space.bounds[static_cast<std::size_t>(d)][1]);
      }
    }
    // A proposal that re-hits a known point adds nothing to a noise-free
    // surrogate, so fall back to a fresh random draw.
    for (const auto& e : campaign.history) {
      double max_diff = 0.0;
      for (std::size_t dd = 0; dd < x.size(); ++dd) {
        max_diff = std::max(max_diff, std::abs(x[dd] - e.params[dd]));
      }
      if (max_diff < 1e-12) {
        for (int dd = 0; dd < space.dims(); ++dd) {
          x[static_cast<std::size_t>(dd)] =
              rng.uniform(space.bounds[static_cast<std::size_t>(dd)][0],
                          space.bounds[static_cast<std::size_t>(dd)][1]);
        }
        break;
      }
    }
    record(std::move(x));
  }
  return campaign;
}

// Objective that simulates the scenario with the template controller's
// structure and the candidate parameter matrix, returning the accumulated
// cost. Simulation failures score `failure_cost`.
inline Objective simulation_objective(const ScenarioSpec& scenario,
                                      const ControllerSpec& controller_template,
                                      std::uint64_t eval_seed, double failure_cost = 1e9) {
  return [scenario, controller_template, eval_seed, failure_cost](std::span<const double> x) {
    try {
      ControllerSpec spec = with_params(controller_template, x);
      Trajectory traj = run(scenario, spec, eval_seed, scenario.horizon_steps);
      return accumulate_cost(traj, scenario).total;
    } catch (const std::exception&) {
      return failure_cost;
    }
  };
}

inline SearchSpace space_for(const ScenarioSpec& scenario, const ControllerSpec& controller_template) {
  return uniform_space(controller_template.n_vectors() * controller_template.n_scalars(),
                       scenario.param_bounds[0], scenario.param_bounds[1]);
}

inline BOCampaign run_bo(const ScenarioSpec& scenario, const ControllerSpec& controller_template,
                         int budget, int n_init, std::uint64_t seed, std::uint64_t eval_seed,
                         const BOOptions& options = {}) {
  return run_bo(simulation_objective(scenario, controller_template, eval_seed, options.failure_cost),
                space_for(scenario, controller_template), budget, n_init, seed, options);
}

struct Histogram {
  std::vector<double> bin_lo;
  std::vector<double> bin_hi;
  std::vector<std::int64_t> counts;

  // Bins are half-open except the last, which includes its upper edge.
  // Values outside [bin_lo.front(), bin_hi.back()] map to -1.
  int find_bin(double value) const {
    for (std::size_t i = 0; i < bin_lo.size(); ++i) {
      bool in_upper = i + 1 == bin_lo.size() ? value <= bin_hi[i] : value < bin_hi[i];
      if (value >= bin_lo[i] && in_upper) return static_cast<int>(i);
    }
    return -1;
  }
};

inline Histogram make_histogram(const std::vector<double>& values, int n_bins = 50) {
  if (values.empty()) throw SpecError("make_histogram: no values");
  if (n_bins < 1) throw SpecError("make_histogram: n_bins must be >= 1");
  auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  double lo = *lo_it, hi = *hi_it;
  if (!(hi > lo)) hi = lo + 1.0;
  Histogram h;
  h.bin_lo.resize(static_cast<std::size_t>(n_bins));
  h.bin_hi.resize(static_cast<std::size_t>(n_bins));
  h.counts.assign(static_cast<std::size_t>(n_bins), 0);
  double width = (hi - lo) / n_bins;
  for (int i = 0; i < n_bins; ++i) {
    h.bin_lo[static_cast<std::size_t>(i)] = lo + i * width;
    h.bin_hi[static_cast<std::size_t>(i)] = i + 1 == n_bins ? hi : lo + (i + 1) * width;
  }
  for (double v : values) {
    int idx = std::clamp(static_cast<int>((v - lo) / width), 0, n_bins - 1);
    ++h.counts[static_cast<std::size_t>(idx)];
  }
  return h;
}

struct RandomSearchResult {
  std::vector<Evaluation> history;  // in trial order
  Histogram histogram;

  const Evaluation& best() const {
    if (history.empty()) throw SpecError("random search: no trials");
    std::size_t best_i = 0;
    for (std::size_t i = 1; i < history.size(); ++i) {
      if (history[i].cost < history[best_i].cost) best_i = i;
    }
    return history[best_i];
  }
};

// Uniform random trials. Each trial's draws derive from (seed, trial), so
// results are identical for any thread count.
inline RandomSearchResult run_random_search(const Objective& objective, const SearchSpace& space,
                                            int trials, std::uint64_t seed, int n_threads = 1,
                                            int n_bins = 50, double failure_cost = 1e9) {
  space.validate();
  if (trials < 1) throw SpecError("run_random_search: trials must be >= 1");
  RandomSearchResult result;
  result.history.resize(static_cast<std::size_t>(trials));

  auto run_trial = [&](int t) {
    Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(t)));
    std::vector<double> x(static_cast<std::size_t>(space.dims()));
    for (int d = 0; d < space.dims(); ++d) {
      x[static_cast<std::size_t>(d)] = rng.uniform(space.bounds[static_cast<std::size_t>(d)][0],
                                                   space.bounds[static_cast<std::size_t>(d)][1]);
    }
    double cost = detail::safe_eval(objective, x, failure_cost);
    result.history[static_cast<std::size_t>(t)] = {std::move(x), cost};
  };

  n_threads = std::clamp(n_threads, 1, trials);
  if (n_threads == 1) {
    for (int t = 0; t < trials; ++t) run_trial(t);
  } else {
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(n_threads));
    for (int w = 0; w < n_threads; ++w) {
      workers.emplace_back([&, w] {
        for (int t = w; t < trials; t += n_threads) run_trial(t);
      });
    }
    for (auto& th : workers) th.join();
  }

  std::vector<double> costs;
  costs.reserve(result.history.size());
  for (const auto& e : result.history) costs.push_back(e.cost);
  result.histogram = make_histogram(costs, n_bins);
  return result;
}

inline RandomSearchResult run_random_search(const ScenarioSpec& scenario,
                                            const ControllerSpec& controller_template, int trials,
                                            std::uint64_t seed, std::uint64_t eval_seed,
                                            int n_threads = 1, int n_bins = 50) {
  return run_random_search(simulation_objective(scenario, controller_template, eval_seed),
                           space_for(scenario, controller_template), trials, seed, n_threads,
                           n_bins);
}

}  // namespace swarmctl
