#pragma once

#include "metricspace/chain.hpp"
#include "metricspace/errors.hpp"
#include "metricspace/generators.hpp"
#include "metricspace/gh.hpp"
#include "metricspace/io.hpp"
#include "metricspace/kuratowski.hpp"
#include "metricspace/metric_space.hpp"
#include "metricspace/product.hpp"
#include "metricspace/ultrametric.hpp"
