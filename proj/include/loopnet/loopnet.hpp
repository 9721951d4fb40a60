#pragma once

#include "loopnet/geometry.hpp"
#include "loopnet/quadrature.hpp"
#include "loopnet/simplex.hpp"
#include "loopnet/loopgroup.hpp"
#include "loopnet/unitary.hpp"
#include "loopnet/holonomy.hpp"
#include "loopnet/mock_lattice.hpp"
#include "loopnet/emfield.hpp"
#include "loopnet/scenario.hpp"
#include "loopnet/io.hpp"
#include "loopnet/checks.hpp"
