#pragma once

#include "tariffcast/arima.hpp"
#include "tariffcast/dataset.hpp"
#include "tariffcast/decomposition.hpp"
#include "tariffcast/error.hpp"
#include "tariffcast/forecast_result.hpp"
#include "tariffcast/metrics.hpp"
#include "tariffcast/registry.hpp"
#include "tariffcast/regression.hpp"
#include "tariffcast/series.hpp"
#include "tariffcast/smoothing.hpp"
#include "tariffcast/tournament.hpp"
