#pragma once

#include "catenoid_ac/errors.hpp"
#include "catenoid_ac/geometry.hpp"
#include "catenoid_ac/grid.hpp"
#include "catenoid_ac/interpolation.hpp"
#include "catenoid_ac/profiles.hpp"
#include "catenoid_ac/reduced_dynamics.hpp"
#include "catenoid_ac/pde_solver.hpp"
#include "catenoid_ac/projection.hpp"
#include "catenoid_ac/csv.hpp"
#include "catenoid_ac/config.hpp"
#include "catenoid_ac/interfaces.hpp"
#include "catenoid_ac/experiment.hpp"
