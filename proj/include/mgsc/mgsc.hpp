#pragma once

#include "mgsc/adam.hpp"
#include "mgsc/config.hpp"
#include "mgsc/dyna.hpp"
#include "mgsc/env.hpp"
#include "mgsc/experiment.hpp"
#include "mgsc/grid.hpp"
#include "mgsc/meta_gradient.hpp"
#include "mgsc/model.hpp"
#include "mgsc/output.hpp"
#include "mgsc/q_learning.hpp"
#include "mgsc/rng.hpp"
#include "mgsc/search_control.hpp"
#include "mgsc/softmax.hpp"
#include "mgsc/stats.hpp"
#include "mgsc/sweep.hpp"
#include "mgsc/transition.hpp"
