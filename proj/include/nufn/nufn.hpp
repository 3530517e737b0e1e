#pragma once

#include "nufn/error.hpp"
#include "nufn/special.hpp"
#include "nufn/quadrature.hpp"
#include "nufn/nu.hpp"
#include "nufn/coherent.hpp"
#include "nufn/doot.hpp"
#include "nufn/identities.hpp"
#include "nufn/format.hpp"
