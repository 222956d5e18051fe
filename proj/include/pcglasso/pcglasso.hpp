#pragma once

#include "pcglasso/coordinate_descent.hpp"
#include "pcglasso/csv.hpp"
#include "pcglasso/drs.hpp"
#include "pcglasso/fbs.hpp"
#include "pcglasso/objective.hpp"
#include "pcglasso/prox.hpp"
#include "pcglasso/rng.hpp"
#include "pcglasso/simulate.hpp"
#include "pcglasso/solver.hpp"
#include "pcglasso/sym_matrix.hpp"
