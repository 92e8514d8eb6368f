#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rgraph/graph.hpp"

namespace rgraph {

/// Marginalize over M, condition on C. Only C = ∅ is supported.
struct MarginalSpec {
    NodeSet marginalize;
    NodeSet condition;
};

/// Result of marginalization over N' = N \ M.
struct InducedGraph {
    /// Every induced edge, deduplicated per kind; may hold several kinds for one pair.
    MixedGraph summary;
    /// Set when the result is a regression graph (after any certified collapse of multi-edges).
    std::optional<RegressionGraph> graph;
    /// Pairs (by name) whose several induced kinds were collapsed to one.
    std::vector<std::pair<std::string, std::string>> collapsed_pairs;

    bool is_regression_graph() const { return graph.has_value(); }
    const RegressionGraph& regression_graph() const;
};

struct MarginalizeOptions {
    /// Multi-edge collapses are certified by comparing implied structures, which is only
    /// attempted for graphs up to this many nodes; larger clashing results stay summary graphs.
    std::size_t certification_bound = 12;
};

/// Applies the transmitting-V edge-induction rules over each node of M (ascending index),
/// then deletes M:
///   i <- o <- k  =>  i <- k        i <- o -- k  =>  i <- k       i -- o -- k  =>  i -- k
///   i <- o ~~ k  =>  i ~~ k        i <- o -> k  =>  i ~~ k
InducedGraph marginalize(const RegressionGraph& g, NodeSet over, const MarginalizeOptions& opts = {});
InducedGraph marginalize(const RegressionGraph& g, const MarginalSpec& spec, const MarginalizeOptions& opts = {});
InducedGraph marginalize(const RegressionGraph& g, const std::vector<std::string>& over,
                         const MarginalizeOptions& opts = {});

/// Same skeleton and the same collision Vs, of any collision form. Node sets are matched by id.
bool markov_equivalent(const RegressionGraph& g1, const RegressionGraph& g2);

/// Edge selected for hidden-variable expansion, by node id.
struct SelectedEdge {
    std::string a;
    std::string b;
};

struct HiddenExpansion {
    MixedGraph graph;
    /// Set when the expanded graph stays a regression graph (only dashed lines were expanded).
    std::optional<RegressionGraph> regression;
    /// Ids of the introduced latent nodes, one per selected edge.
    std::vector<std::string> latents;

    bool in_regression_class() const { return regression.has_value(); }
};

/// Replaces each selected undirected edge i ~~ k by i <- L -> k with a new latent L.
/// Dashed lines keep the regression-graph class (L goes in a new block just after the pair's
/// block). Full lines leave the class and are returned only as a mixed graph.
/// Throws EdgeNotDashed for arrows or absent edges.
HiddenExpansion expand_hidden(const RegressionGraph& g, const std::vector<SelectedEdge>& edges);

}  // namespace rgraph
