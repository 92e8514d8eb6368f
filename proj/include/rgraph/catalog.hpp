#pragma once

#include <cstdint>
#include <vector>

#include "rgraph/graph.hpp"

namespace rgraph {

struct CatalogEntry {
    RegressionGraph graph;
    /// Bit p set iff the p-th node pair (0,1), (0,2), ..., (n-2,n-1) is coupled.
    std::uint32_t skeleton = 0;
};

/// Every graph on `n` nodes (named "1".."n") that admits a regression-graph block ordering,
/// one representative per isomorphism class. Representatives use a canonical labeling that
/// first minimizes the skeleton code, so graphs with isomorphic skeletons share one skeleton.
std::vector<CatalogEntry> regression_graph_catalog(std::size_t n);

/// Union of the catalogs for 1..max_nodes nodes.
std::vector<CatalogEntry> regression_graph_catalog_upto(std::size_t max_nodes);

}  // namespace rgraph
