#pragma once

#include "mapu/core.hpp"
#include "mapu/error.hpp"
#include "mapu/io.hpp"
#include "mapu/matching.hpp"
#include "mapu/oracle.hpp"
#include "mapu/random.hpp"
#include "mapu/rational.hpp"
#include "mapu/scheduling.hpp"
#include "mapu/solver.hpp"
#include "mapu/variants.hpp"
