#pragma once

#include "gsim/graph.hpp"
#include "gsim/graphlet.hpp"
#include "gsim/labeling.hpp"
#include "gsim/kdtree.hpp"
#include "gsim/index_io.hpp"
#include "gsim/matching.hpp"
#include "gsim/matcher.hpp"
#include "gsim/pipeline.hpp"
#include "gsim/bench.hpp"
