#pragma once

// Convenience umbrella header.

#include "ggn/eval.hpp"
#include "ggn/game.hpp"
#include "ggn/ggn.hpp"
#include "ggn/graph.hpp"
#include "ggn/inference.hpp"
#include "ggn/karate.hpp"
#include "ggn/rng.hpp"
#include "ggn/team_game.hpp"
