#pragma once

#include "grenier/errors.hpp"
#include "grenier/grid.hpp"
#include "grenier/state.hpp"
#include "grenier/dynamics.hpp"
#include "grenier/phase.hpp"
#include "grenier/experiments.hpp"
#include "grenier/config.hpp"
#include "grenier/io.hpp"
#include "grenier/commands.hpp"
