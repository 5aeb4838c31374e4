#pragma once

#include "skewdich/base_space.hpp"
#include "skewdich/cocycle.hpp"
#include "skewdich/criteria.hpp"
#include "skewdich/dichotomy.hpp"
#include "skewdich/errors.hpp"
#include "skewdich/expression.hpp"
#include "skewdich/gallery.hpp"
#include "skewdich/generator.hpp"
#include "skewdich/grid.hpp"
#include "skewdich/growth.hpp"
#include "skewdich/log_scalar.hpp"
#include "skewdich/matrix.hpp"
#include "skewdich/minimax.hpp"
#include "skewdich/projectors.hpp"
#include "skewdich/quadrature.hpp"
#include "skewdich/spectral.hpp"
