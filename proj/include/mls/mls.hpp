#pragma once

#include "mls/rational.hpp"
#include "mls/graph.hpp"
#include "mls/graph_io.hpp"
#include "mls/edge_path.hpp"
#include "mls/metric.hpp"
#include "mls/word_calculus.hpp"
#include "mls/free_group.hpp"
#include "mls/fundamental_group.hpp"
#include "mls/hull.hpp"
#include "mls/rigidity.hpp"
#include "mls/disguise.hpp"
