#pragma once

#include "edge_lca/error.hpp"
#include "edge_lca/model.hpp"
#include "edge_lca/factors.hpp"
#include "edge_lca/estimator.hpp"
#include "edge_lca/sensitivity.hpp"
#include "edge_lca/projection.hpp"
#include "edge_lca/profiles_io.hpp"
#include "edge_lca/report.hpp"
#include "edge_lca/defaults.hpp"
