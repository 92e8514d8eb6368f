#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rgraph/error.hpp"
#include "rgraph/node_set.hpp"

namespace rgraph {

enum class EdgeKind : std::uint8_t { Arrow, Dashed, Full };

std::string_view edge_kind_name(EdgeKind kind);

/// A stored edge. Arrows run `from` (tail) -> `to` (head); undirected edges keep from < to.
struct Edge {
    NodeIndex from = 0;
    NodeIndex to = 0;
    EdgeKind kind = EdgeKind::Arrow;

    auto operator<=>(const Edge&) const = default;
};

/// How an edge meets one of its endpoints. Heads and dashed ends are arrowhead-like.
enum class EndMark : std::uint8_t { Head, Tail, Dashed, Line };

constexpr bool arrowhead_like(EndMark m) { return m == EndMark::Head || m == EndMark::Dashed; }

EndMark end_at(const Edge& e, NodeIndex node);
NodeIndex other_end(const Edge& e, NodeIndex node);

/// Graph with arrows, dashed and full lines that may carry several kinds per node pair.
/// Regression graphs are the simple, block-compatible special case; summary graphs
/// produced by marginalization live here directly.
class MixedGraph {
public:
    MixedGraph() = default;
    explicit MixedGraph(std::vector<std::string> names);

    std::size_t size() const { return names_.size(); }
    NodeSet all() const { return NodeSet::first(size()); }
    const std::vector<std::string>& names() const { return names_; }
    const std::string& name(NodeIndex i) const { return names_.at(i); }
    std::optional<NodeIndex> find(std::string_view name) const;
    NodeIndex index_of(std::string_view name) const;

    /// Inserts the edge unless an identical one exists; returns whether it was new.
    bool add_edge(NodeIndex from, NodeIndex to, EdgeKind kind);

    bool has_arrow(NodeIndex tail, NodeIndex head) const { return children_[tail].contains(head); }
    bool has_dashed(NodeIndex a, NodeIndex b) const { return dashed_[a].contains(b); }
    bool has_full(NodeIndex a, NodeIndex b) const { return full_[a].contains(b); }
    bool adjacent(NodeIndex a, NodeIndex b) const { return neighbors(a).contains(b); }

    NodeSet children(NodeIndex i) const { return children_[i]; }
    NodeSet parents(NodeIndex i) const { return parents_[i]; }
    NodeSet dashed_neighbors(NodeIndex i) const { return dashed_[i]; }
    NodeSet full_neighbors(NodeIndex i) const { return full_[i]; }
    NodeSet neighbors(NodeIndex i) const { return children_[i] | parents_[i] | dashed_[i] | full_[i]; }

    /// Edges between a and b (0..4 of them), canonical form.
    std::vector<Edge> edges_between(NodeIndex a, NodeIndex b) const;
    /// All edges, sorted.
    std::vector<Edge> edges() const;
    std::size_t edge_count() const;
    bool is_simple() const;

    /// Nodes from which some member of `targets` is reachable along arrows (forward) and full lines.
    NodeSet anterior(NodeSet targets) const;

    /// Subgraph induced by `keep`, nodes renumbered in increasing index order.
    MixedGraph induced(NodeSet keep) const;

    bool operator==(const MixedGraph&) const = default;

private:
    std::vector<std::string> names_;
    std::vector<NodeSet> children_, parents_, dashed_, full_;
};

/// User-facing node identity.
struct NodeId {
    std::string id;
    std::string label;
};

/// Ordered blocks g_1 < ... < g_J by node id; the last `blocks.size() - split` blocks
/// form the context part v (at most one block).
struct BlockOrdering {
    std::vector<std::vector<std::string>> blocks;
    std::size_t split = 0;
};

struct EdgeSpec {
    std::string from;
    std::string to;
    EdgeKind kind = EdgeKind::Arrow;
};

/// Factor f_{response | conditioning} of the block factorization. `parents` is the part of
/// the conditioning set with arrows into the block.
struct Factor {
    NodeSet response;
    NodeSet conditioning;
    NodeSet parents;
};

enum class VKind : std::uint8_t { Collision, Transmitting };

/// The eight V shapes of a regression graph, named with the inner node o in the middle.
enum class VForm : std::uint8_t {
    ArrowArrowCollision,    // i -> o <- k
    DashedArrowCollision,   // i ~~ o <- k
    DashedDashedCollision,  // i ~~ o ~~ k
    ArrowChain,             // i <- o <- k
    ArrowFullChain,         // i <- o -- k
    FullFullChain,          // i -- o -- k
    ArrowDashedChain,       // i <- o ~~ k
    CommonSource,           // i <- o -> k
};

std::string_view v_form_name(VForm form);

struct VConfiguration {
    NodeIndex i = 0;  // i < k
    NodeIndex o = 0;
    NodeIndex k = 0;
    EndMark end_i_at_o = EndMark::Head;  // mark of the (i, o) edge at o
    EndMark end_k_at_o = EndMark::Head;
    EndMark end_at_i = EndMark::Head;    // mark of the (i, o) edge at i
    EndMark end_at_k = EndMark::Head;
    VKind kind = VKind::Collision;
    VForm form = VForm::ArrowArrowCollision;

    bool operator==(const VConfiguration&) const = default;
};

class RegressionGraph;
RegressionGraph build_graph(const std::vector<NodeId>& nodes, const BlockOrdering& ordering,
                            const std::vector<EdgeSpec>& edges);

/// Validated regression graph: simple, block-ordered, immutable.
class RegressionGraph {
public:
    const MixedGraph& structure() const { return structure_; }
    std::size_t size() const { return structure_.size(); }
    NodeSet all() const { return structure_.all(); }
    const std::vector<std::string>& names() const { return structure_.names(); }
    const std::string& name(NodeIndex i) const { return structure_.name(i); }
    const std::string& label(NodeIndex i) const { return labels_.at(i); }
    NodeIndex index_of(std::string_view name) const { return structure_.index_of(name); }
    NodeSet node_set(const std::vector<std::string>& names) const;

    const std::vector<NodeSet>& blocks() const { return blocks_; }
    std::size_t response_block_count() const { return split_; }
    bool has_context() const { return split_ < blocks_.size(); }
    NodeSet context() const { return has_context() ? blocks_.back() : NodeSet{}; }
    NodeSet responses() const { return all() - context(); }
    std::size_t block_of(NodeIndex i) const { return block_index_.at(i); }
    /// g_{>j}: union of blocks after block j.
    NodeSet after(std::size_t j) const;
    /// g_{<j}: union of blocks before block j.
    NodeSet before(std::size_t j) const;
    BlockOrdering ordering() const;

    std::vector<Edge> edges() const { return structure_.edges(); }
    /// The single edge between a and b, if any.
    std::optional<Edge> edge_between(NodeIndex a, NodeIndex b) const;
    bool adjacent(NodeIndex a, NodeIndex b) const { return structure_.adjacent(a, b); }

    bool operator==(const RegressionGraph&) const = default;

private:
    friend RegressionGraph build_graph(const std::vector<NodeId>&, const BlockOrdering&,
                                       const std::vector<EdgeSpec>&);
    MixedGraph structure_;
    std::vector<std::string> labels_;
    std::vector<NodeSet> blocks_;
    std::size_t split_ = 0;
    std::vector<std::size_t> block_index_;
};

/// Validates `g` against `ordering` and wraps it (labels default to ids).
RegressionGraph to_regression_graph(const MixedGraph& g, const BlockOrdering& ordering);

/// A block ordering under which `g` is a regression graph, if one exists: context = nodes with
/// neither incoming arrows nor dashed lines; responses grouped by dashed-line components in
/// topological order (final responses first).
std::optional<BlockOrdering> compatible_ordering(const MixedGraph& g);

/// Connected components after deleting all arrows, ordered by smallest member.
std::vector<NodeSet> connected_components_undirected(const RegressionGraph& g);
std::vector<NodeSet> connected_components_undirected(const MixedGraph& g);

std::vector<VConfiguration> enumerate_vs(const RegressionGraph& g);
/// Endpoint pairs {i, k} (as two-element sets) with at least one collision V.
std::vector<NodeSet> collision_pairs(const RegressionGraph& g);

std::vector<Factor> factorization(const RegressionGraph& g);
/// "f_{1|2}" style rendering; `reduced` conditions on block parents only.
std::string format_factor(const RegressionGraph& g, const Factor& f, bool reduced);

/// Renders a node set as "a,b,c" in index order (or "{}" if `braces` and empty).
std::string format_nodes(const MixedGraph& g, NodeSet s);

}  // namespace rgraph
