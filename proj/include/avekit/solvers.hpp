#pragma once

#include "avekit/solvers/auto.hpp"
#include "avekit/solvers/common.hpp"
#include "avekit/solvers/concave.hpp"
#include "avekit/solvers/enumerate.hpp"
#include "avekit/solvers/gauss_seidel.hpp"
#include "avekit/solvers/newton.hpp"
#include "avekit/solvers/picard.hpp"
#include "avekit/solvers/sign_accord.hpp"
