#pragma once

#include "saext/boundary.hpp"
#include "saext/eigensolver.hpp"
#include "saext/errors.hpp"
#include "saext/experiments.hpp"
#include "saext/fem.hpp"
#include "saext/geometry.hpp"
#include "saext/oracle.hpp"
#include "saext/potential.hpp"
#include "saext/types.hpp"
