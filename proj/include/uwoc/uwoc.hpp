#pragma once

// Umbrella header: analytic TDHP BER model, Monte-Carlo simulation, water
// channel presets, link-budget geometry, and the sweep harness.

#include "uwoc/config.hpp"
#include "uwoc/errors.hpp"
#include "uwoc/io.hpp"
#include "uwoc/link_geometry.hpp"
#include "uwoc/math.hpp"
#include "uwoc/rng.hpp"
#include "uwoc/sim.hpp"
#include "uwoc/svg.hpp"
#include "uwoc/sweeps.hpp"
#include "uwoc/tdhp.hpp"
#include "uwoc/water_channel.hpp"
