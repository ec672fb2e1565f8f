// chiralcav.hpp - umbrella header.

#pragma once

#include "analytic.hpp"
#include "cli.hpp"
#include "detect.hpp"
#include "dynamics.hpp"
#include "errors.hpp"
#include "model.hpp"
#include "molecule.hpp"
#include "observables.hpp"
#include "params_io.hpp"
#include "report.hpp"
#include "steady_solver.hpp"
#include "sweep.hpp"
#include "units.hpp"
