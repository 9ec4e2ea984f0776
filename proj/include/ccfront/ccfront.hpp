#pragma once

#include "ccfront/config.hpp"
#include "ccfront/errors.hpp"
#include "ccfront/frontier.hpp"
#include "ccfront/io.hpp"
#include "ccfront/math.hpp"
#include "ccfront/problems.hpp"
#include "ccfront/projections.hpp"
#include "ccfront/risk.hpp"
#include "ccfront/rng.hpp"
#include "ccfront/smoothing.hpp"
#include "ccfront/solver.hpp"
