#pragma once

#include "besdp/divergence.hpp"
#include "besdp/errors.hpp"
#include "besdp/io.hpp"
#include "besdp/linalg.hpp"
#include "besdp/optimize.hpp"
#include "besdp/qsim.hpp"
#include "besdp/rng.hpp"
#include "besdp/sdp.hpp"
#include "besdp/thermal.hpp"
