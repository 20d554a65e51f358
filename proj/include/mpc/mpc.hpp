#pragma once

#include "mpc/error.hpp"
#include "mpc/params.hpp"
#include "mpc/profiles.hpp"
#include "mpc/packing.hpp"
#include "mpc/grid.hpp"
#include "mpc/verify.hpp"
#include "mpc/io.hpp"
#include "mpc/bench.hpp"
