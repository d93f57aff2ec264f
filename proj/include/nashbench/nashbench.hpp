#pragma once

#include "nashbench/bench.hpp"
#include "nashbench/game.hpp"
#include "nashbench/gamegen.hpp"
#include "nashbench/nfg.hpp"
#include "nashbench/solvers.hpp"
