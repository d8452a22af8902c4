#pragma once

#include "optoent/constants.hpp"
#include "optoent/errors.hpp"
#include "optoent/gaussian.hpp"
#include "optoent/linmodel.hpp"
#include "optoent/lyapunov.hpp"
#include "optoent/params.hpp"
#include "optoent/steadystate.hpp"
#include "optoent/sweep.hpp"
