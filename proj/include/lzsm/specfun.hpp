#pragma once

#include "lzsm/specfun/bessel.hpp"
#include "lzsm/specfun/extreal.hpp"
#include "lzsm/specfun/fresnel.hpp"
#include "lzsm/specfun/gamma.hpp"
#include "lzsm/specfun/weber.hpp"
