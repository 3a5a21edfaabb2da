#pragma once

// Umbrella header for the EOG wheelchair-control simulation chain.

#include "eogsim/decision.hpp"
#include "eogsim/error.hpp"
#include "eogsim/eval.hpp"
#include "eogsim/filter.hpp"
#include "eogsim/frontend.hpp"
#include "eogsim/io.hpp"
#include "eogsim/motor.hpp"
#include "eogsim/pipeline.hpp"
#include "eogsim/signal.hpp"
