#pragma once

#include "swifi/config.hpp"
#include "swifi/csma.hpp"
#include "swifi/deployment.hpp"
#include "swifi/metric_curve.hpp"
#include "swifi/montecarlo.hpp"
#include "swifi/planner.hpp"
#include "swifi/propagation.hpp"
#include "swifi/quadrature.hpp"
#include "swifi/rng.hpp"
#include "swifi/sinr.hpp"
#include "swifi/units.hpp"
#include "swifi/uplink.hpp"
