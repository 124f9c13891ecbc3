#pragma once

#include "clairaut_map.hpp"
#include "diagram_oracle.hpp"
#include "errors.hpp"
#include "geodesic_ode.hpp"
#include "half_int.hpp"
#include "io.hpp"
#include "linking_calculus.hpp"
#include "numerics.hpp"
#include "profile.hpp"
#include "spherical.hpp"
#include "spline.hpp"
#include "version.hpp"
