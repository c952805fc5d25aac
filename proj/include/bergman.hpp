#pragma once

#include "bergman/acceptance.hpp"
#include "bergman/domain.hpp"
#include "bergman/divergence.hpp"
#include "bergman/enumerate.hpp"
#include "bergman/errors.hpp"
#include "bergman/gamma.hpp"
#include "bergman/hankel.hpp"
#include "bergman/io.hpp"
#include "bergman/norms.hpp"
#include "bergman/oracles.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/summation.hpp"
