#pragma once

#include "pvmech/cost.hpp"
#include "pvmech/envelope.hpp"
#include "pvmech/error.hpp"
#include "pvmech/generators.hpp"
#include "pvmech/instance.hpp"
#include "pvmech/json_io.hpp"
#include "pvmech/lattice.hpp"
#include "pvmech/maxflow.hpp"
#include "pvmech/mincut.hpp"
#include "pvmech/oracle.hpp"
#include "pvmech/oracle_io.hpp"
#include "pvmech/rational.hpp"
#include "pvmech/simplex.hpp"
#include "pvmech/submodular.hpp"
