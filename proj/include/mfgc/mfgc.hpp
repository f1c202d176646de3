#pragma once

#include "mfgc/core.hpp"
#include "mfgc/hjb.hpp"
#include "mfgc/equilibria.hpp"
#include "mfgc/stability.hpp"
#include "mfgc/rng.hpp"
#include "mfgc/dynamics.hpp"
#include "mfgc/config.hpp"
#include "mfgc/commands.hpp"
