#pragma once

#include "cvtele/codebook.hpp"
#include "cvtele/error.hpp"
#include "cvtele/gaussian_state.hpp"
#include "cvtele/nocloning.hpp"
#include "cvtele/optimize.hpp"
#include "cvtele/params.hpp"
#include "cvtele/quadrature.hpp"
#include "cvtele/recipes.hpp"
#include "cvtele/security.hpp"
#include "cvtele/special.hpp"
#include "cvtele/sweep.hpp"
#include "cvtele/teleport.hpp"
#include "cvtele/units.hpp"
#include "cvtele/version.hpp"
