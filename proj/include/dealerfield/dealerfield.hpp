#pragma once

#include "dealerfield/model.hpp"
#include "dealerfield/orderflow.hpp"
#include "dealerfield/quoting.hpp"
#include "dealerfield/dp_ladder.hpp"
#include "dealerfield/engine.hpp"
#include "dealerfield/metrics.hpp"
#include "dealerfield/config_io.hpp"
#include "dealerfield/presets.hpp"
#include "dealerfield/csv.hpp"
