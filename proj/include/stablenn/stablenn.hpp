#pragma once

#include "activations.hpp"
#include "density.hpp"
#include "error.hpp"
#include "limit_theory.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "simulator.hpp"
#include "stable.hpp"
#include "verify.hpp"
