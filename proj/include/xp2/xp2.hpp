#pragma once

#include "xp2/classical.hpp"
#include "xp2/model.hpp"
#include "xp2/numerics/dense.hpp"
#include "xp2/numerics/ode.hpp"
#include "xp2/numerics/quadrature.hpp"
#include "xp2/numerics/roots.hpp"
#include "xp2/numerics/tridiag.hpp"
#include "xp2/quantum.hpp"
#include "xp2/schrodinger.hpp"
#include "xp2/semiclassical.hpp"
#include "xp2/specfun/elliptic.hpp"
#include "xp2/spectrum.hpp"
