#pragma once

#include "lqw/errors.hpp"
#include "lqw/random.hpp"
#include "lqw/csv.hpp"
#include "lqw/walk_core.hpp"
#include "lqw/lackadaisical.hpp"
#include "lqw/mlp.hpp"
#include "lqw/search_space.hpp"
#include "lqw/sampling.hpp"
#include "lqw/trainer.hpp"
