#pragma once

#include "mgraph/algos.hpp"
#include "mgraph/edge_list.hpp"
#include "mgraph/genmodel.hpp"
#include "mgraph/graph.hpp"
#include "mgraph/metrics.hpp"
#include "mgraph/oracle.hpp"
#include "mgraph/parallel.hpp"
#include "mgraph/properties.hpp"
#include "mgraph/random.hpp"
#include "mgraph/theory.hpp"

namespace mgraph {
inline constexpr const char* kVersion = "0.1.0";
}
