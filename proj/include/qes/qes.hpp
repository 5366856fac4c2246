#pragma once

#include "qes/error.hpp"
#include "qes/model.hpp"
#include "qes/oracle.hpp"
#include "qes/polynomial.hpp"
#include "qes/rational.hpp"
#include "qes/records.hpp"
#include "qes/solver.hpp"
#include "qes/stencil.hpp"
#include "qes/sweep.hpp"
