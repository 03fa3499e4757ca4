#pragma once

#include "lgc/assignment.hpp"
#include "lgc/centroid_search.hpp"
#include "lgc/covariance.hpp"
#include "lgc/gaussian.hpp"
#include "lgc/io.hpp"
#include "lgc/parallel.hpp"
#include "lgc/pipeline.hpp"
#include "lgc/spatial_index.hpp"
#include "lgc/types.hpp"
