#pragma once

#include "lzsm/analytic.hpp"
#include "lzsm/blochpert.hpp"
#include "lzsm/error.hpp"
#include "lzsm/integrate.hpp"
#include "lzsm/model.hpp"
#include "lzsm/specfun.hpp"
