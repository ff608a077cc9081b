#pragma once

// Umbrella header.

#include "medp/decomposition.hpp"
#include "medp/errors.hpp"
#include "medp/exact.hpp"
#include "medp/flow.hpp"
#include "medp/generators.hpp"
#include "medp/graph.hpp"
#include "medp/json_io.hpp"
#include "medp/lp.hpp"
#include "medp/pipeline.hpp"
#include "medp/rational.hpp"
#include "medp/reductions.hpp"
#include "medp/rounding.hpp"
