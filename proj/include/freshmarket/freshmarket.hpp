#pragma once

#include "cost_models.hpp"
#include "destination_response.hpp"
#include "json_io.hpp"
#include "market_core.hpp"
#include "pricing_solvers.hpp"
#include "quadrature.hpp"
#include "rng.hpp"
#include "simulation.hpp"
