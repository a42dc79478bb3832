#pragma once

#include "hcsp/construction.hpp"
#include "hcsp/error.hpp"
#include "hcsp/etc_matrix.hpp"
#include "hcsp/fixtures.hpp"
#include "hcsp/neighborhood.hpp"
#include "hcsp/oracle.hpp"
#include "hcsp/schedule.hpp"
#include "hcsp/solver.hpp"
#include "hcsp/stats.hpp"
