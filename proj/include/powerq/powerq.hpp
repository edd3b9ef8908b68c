#pragma once

#include "powerq/calculus.hpp"
#include "powerq/checks.hpp"
#include "powerq/error.hpp"
#include "powerq/expr.hpp"
#include "powerq/function.hpp"
#include "powerq/integration.hpp"
#include "powerq/lattice.hpp"
#include "powerq/variational.hpp"
