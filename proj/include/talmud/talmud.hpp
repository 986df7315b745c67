#pragma once

// Umbrella header for the weighted rebalancing-rule library.

#include "talmud/curves.hpp"
#include "talmud/depth.hpp"
#include "talmud/io.hpp"
#include "talmud/rule.hpp"
#include "talmud/simulate.hpp"
#include "talmud/weights.hpp"
