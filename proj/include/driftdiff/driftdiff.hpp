#pragma once

#include "driftdiff/config.hpp"
#include "driftdiff/diagnostics.hpp"
#include "driftdiff/flux.hpp"
#include "driftdiff/grid.hpp"
#include "driftdiff/io.hpp"
#include "driftdiff/linalg.hpp"
#include "driftdiff/oracles.hpp"
#include "driftdiff/potential.hpp"
#include "driftdiff/presets.hpp"
#include "driftdiff/runner.hpp"
#include "driftdiff/simulate.hpp"
#include "driftdiff/smooth.hpp"
#include "driftdiff/solver.hpp"
