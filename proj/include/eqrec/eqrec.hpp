#pragma once

#include "eqrec/errors.hpp"
#include "eqrec/linalg.hpp"
#include "eqrec/core_model.hpp"
#include "eqrec/solvers.hpp"
#include "eqrec/structure.hpp"
#include "eqrec/leontief.hpp"
#include "eqrec/recession.hpp"
#include "eqrec/sampling.hpp"
#include "eqrec/csv.hpp"
#include "eqrec/registries.hpp"
#include "eqrec/niot.hpp"
#include "eqrec/config.hpp"
#include "eqrec/workflow.hpp"
#include "eqrec/report.hpp"
