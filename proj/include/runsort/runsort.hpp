// SPDX-License-Identifier: Apache-2.0

#ifndef RUNSORT_RUNSORT_HPP
#define RUNSORT_RUNSORT_HPP

#include "runsort/array_io.hpp"
#include "runsort/bench.hpp"
#include "runsort/gen.hpp"
#include "runsort/merge_tree.hpp"
#include "runsort/metrics.hpp"
#include "runsort/node_power.hpp"
#include "runsort/opttree.hpp"
#include "runsort/runcore.hpp"
#include "runsort/sort_item.hpp"
#include "runsort/sorters.hpp"

#endif  // RUNSORT_RUNSORT_HPP
