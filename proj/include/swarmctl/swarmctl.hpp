#pragma once

#include "swarmctl/bayesopt.hpp"
#include "swarmctl/config.hpp"
#include "swarmctl/controller.hpp"
#include "swarmctl/csv.hpp"
#include "swarmctl/error.hpp"
#include "swarmctl/gp.hpp"
#include "swarmctl/measurements.hpp"
#include "swarmctl/rng.hpp"
#include "swarmctl/scenario.hpp"
#include "swarmctl/sim.hpp"
#include "swarmctl/svg.hpp"
#include "swarmctl/tasks.hpp"
#include "swarmctl/vec2.hpp"
#include "swarmctl/version.hpp"
#include "swarmctl/world.hpp"
