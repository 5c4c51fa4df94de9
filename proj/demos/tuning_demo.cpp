// Minimizes a one-dimensional toy objective with the model-guided tuner and
// prints the incumbent trace, then compares against random search.

#include <cstdio>

#include "swarmctl/swarmctl.hpp"

using namespace swarmctl;

int main() {
  auto objective = [](std::span<const double> x) {
    double d = x[0] - 0.3;
    return d * d;
  };
  SearchSpace space = uniform_space(1, 0.0, 1.0);

  BOCampaign campaign = run_bo(objective, space, 25, 5, 7);
  std::printf("guided search over %d evaluations:\n", campaign.budget);
  for (std::size_t i = 0; i < campaign.history.size(); ++i) {
    if (i % 5 == 0 || i + 1 == campaign.history.size()) {
      std::printf("  eval %2zu  x=%.4f  cost=%.6f  incumbent=%.6f\n", i,
                  campaign.history[i].params[0], campaign.history[i].cost,
                  campaign.incumbent_trace[i]);
    }
  }
  std::printf("incumbent x=%.4f (target 0.3)\n", campaign.incumbent().params[0]);

  RandomSearchResult random = run_random_search(objective, space, 25, 7);
  std::printf("random baseline over 25 trials: best cost %.6f\n", random.best().cost);
  return 0;
}
