#pragma once

#include "dqe/core/error.hpp"
#include "dqe/core/linalg.hpp"
#include "dqe/core/propagate.hpp"
#include "dqe/core/spin.hpp"
#include "dqe/core/state.hpp"
#include "dqe/model/basis.hpp"
#include "dqe/model/hamiltonian.hpp"
#include "dqe/model/params.hpp"
#include "dqe/effective/elimination.hpp"
#include "dqe/effective/polynomial.hpp"
#include "dqe/effective/shifts.hpp"
#include "dqe/effective/tuning.hpp"
#include "dqe/effective/zero_field.hpp"
#include "dqe/dynamics/observables.hpp"
#include "dqe/dynamics/protocols.hpp"
#include "dqe/experiments/io.hpp"
#include "dqe/experiments/rwa_validation.hpp"
#include "dqe/experiments/sweep.hpp"
#include "dqe/experiments/zero_field_scan.hpp"
#include "dqe/cli/config.hpp"
#include "dqe/cli/dispatch.hpp"
#include "dqe/cli/units.hpp"
