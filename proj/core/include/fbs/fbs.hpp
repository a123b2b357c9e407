#pragma once

#include "fbs/aggregation.hpp"
#include "fbs/core.hpp"
#include "fbs/cost.hpp"
#include "fbs/dataset_io.hpp"
#include "fbs/evaluation.hpp"
#include "fbs/optimization.hpp"
#include "fbs/parallel.hpp"
#include "fbs/pipeline.hpp"
