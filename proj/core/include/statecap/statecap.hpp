#pragma once

#include "statecap/errors.hpp"
#include "statecap/eval.hpp"
#include "statecap/fusion.hpp"
#include "statecap/ingest.hpp"
#include "statecap/localization.hpp"
#include "statecap/model.hpp"
#include "statecap/predictions.hpp"
#include "statecap/sampling.hpp"
#include "statecap/sim.hpp"
