#pragma once

// Umbrella header.

#include "teamform/assumptions.hpp"
#include "teamform/base.hpp"
#include "teamform/dynamics.hpp"
#include "teamform/fixtures.hpp"
#include "teamform/lattice.hpp"
#include "teamform/model.hpp"
#include "teamform/model_io.hpp"
#include "teamform/payoffs.hpp"
#include "teamform/simulate.hpp"
#include "teamform/stability.hpp"
#include "teamform/types.hpp"
#include "teamform/verify.hpp"
