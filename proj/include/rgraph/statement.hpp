#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "rgraph/graph.hpp"

namespace rgraph {

/// a ⊥ b | c over node indices of one graph.
struct IndependenceStatement {
    NodeSet a;
    NodeSet b;
    NodeSet c;

    auto operator<=>(const IndependenceStatement&) const = default;
};

/// Parses "A _||_ B | C" where each side is a comma-separated node list; "| C" is optional.
IndependenceStatement parse_statement(const MixedGraph& g, std::string_view text);

/// Renders in the parse syntax, e.g. "1 _||_ 3,4 | 2".
std::string format_statement(const MixedGraph& g, const IndependenceStatement& s);

/// One pairwise statement per uncoupled pair, read off the block ordering:
/// i ⊥ k | g_{>j} within response block g_j, i ⊥ k | g_{>j} \ {k} for k in the past of i,
/// and i ⊥ k | v \ {i, k} within the context block.
std::vector<IndependenceStatement> defining_statements(const RegressionGraph& g);

}  // namespace rgraph
