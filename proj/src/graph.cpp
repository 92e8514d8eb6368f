#include "rgraph/graph.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "rgraph/statement.hpp"

namespace rgraph {

std::string_view errc_name(Errc code) {
    switch (code) {
        case Errc::ParseError: return "ParseError";
        case Errc::UnknownNode: return "UnknownNode";
        case Errc::DuplicateNode: return "DuplicateNode";
        case Errc::DuplicateEdge: return "DuplicateEdge";
        case Errc::SelfEdge: return "SelfEdge";
        case Errc::EdgeKindViolatesBlocks: return "EdgeKindViolatesBlocks";
        case Errc::ArrowPointsToPast: return "ArrowPointsToPast";
        case Errc::NodeNotInAnyBlock: return "NodeNotInAnyBlock";
        case Errc::MultipleContextBlocks: return "MultipleContextBlocks";
        case Errc::TooManyNodes: return "TooManyNodes";
        case Errc::NodesNotDisjoint: return "NodesNotDisjoint";
        case Errc::GraphTooLarge: return "GraphTooLarge";
        case Errc::NoWitnessFound: return "NoWitnessFound";
        case Errc::NodeSetMismatch: return "NodeSetMismatch";
        case Errc::EdgeNotDashed: return "EdgeNotDashed";
        case Errc::ConditioningNotSupported: return "ConditioningNotSupported";
        case Errc::NotARegressionGraph: return "NotARegressionGraph";
        case Errc::PDRepairFailed: return "PDRepairFailed";
        case Errc::SingularSubmatrix: return "SingularSubmatrix";
        case Errc::RankDeficient: return "RankDeficient";
        case Errc::TooFewRows: return "TooFewRows";
        case Errc::MissingValues: return "MissingValues";
        case Errc::ConfigError: return "ConfigError";
        case Errc::InvalidArgument: return "InvalidArgument";
    }
    return "Error";
}

std::string_view edge_kind_name(EdgeKind kind) {
    switch (kind) {
        case EdgeKind::Arrow: return "arrow";
        case EdgeKind::Dashed: return "dashed";
        case EdgeKind::Full: return "full";
    }
    return "?";
}

std::string_view v_form_name(VForm form) {
    switch (form) {
        case VForm::ArrowArrowCollision: return "i -> o <- k";
        case VForm::DashedArrowCollision: return "i ~~ o <- k";
        case VForm::DashedDashedCollision: return "i ~~ o ~~ k";
        case VForm::ArrowChain: return "i <- o <- k";
        case VForm::ArrowFullChain: return "i <- o -- k";
        case VForm::FullFullChain: return "i -- o -- k";
        case VForm::ArrowDashedChain: return "i <- o ~~ k";
        case VForm::CommonSource: return "i <- o -> k";
    }
    return "?";
}

EndMark end_at(const Edge& e, NodeIndex node) {
    switch (e.kind) {
        case EdgeKind::Arrow: return node == e.to ? EndMark::Head : EndMark::Tail;
        case EdgeKind::Dashed: return EndMark::Dashed;
        case EdgeKind::Full: return EndMark::Line;
    }
    return EndMark::Line;
}

NodeIndex other_end(const Edge& e, NodeIndex node) { return e.from == node ? e.to : e.from; }

// ---------------------------------------------------------------------------
// MixedGraph

MixedGraph::MixedGraph(std::vector<std::string> names)
    : names_(std::move(names)),
      children_(names_.size()),
      parents_(names_.size()),
      dashed_(names_.size()),
      full_(names_.size()) {
    if (names_.size() > kMaxNodes) {
        throw Error(Errc::TooManyNodes, "at most " + std::to_string(kMaxNodes) + " nodes are supported");
    }
}

std::optional<NodeIndex> MixedGraph::find(std::string_view name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) return std::nullopt;
    return static_cast<NodeIndex>(it - names_.begin());
}

NodeIndex MixedGraph::index_of(std::string_view name) const {
    if (auto i = find(name)) return *i;
    throw Error(Errc::UnknownNode, "no node named '" + std::string(name) + "'");
}

bool MixedGraph::add_edge(NodeIndex from, NodeIndex to, EdgeKind kind) {
    if (from >= size() || to >= size()) throw Error(Errc::UnknownNode, "edge endpoint out of range");
    if (from == to) throw Error(Errc::SelfEdge, "self-edge at '" + names_[from] + "'");
    switch (kind) {
        case EdgeKind::Arrow:
            if (children_[from].contains(to)) return false;
            children_[from].insert(to);
            parents_[to].insert(from);
            return true;
        case EdgeKind::Dashed:
            if (dashed_[from].contains(to)) return false;
            dashed_[from].insert(to);
            dashed_[to].insert(from);
            return true;
        case EdgeKind::Full:
            if (full_[from].contains(to)) return false;
            full_[from].insert(to);
            full_[to].insert(from);
            return true;
    }
    return false;
}

std::vector<Edge> MixedGraph::edges_between(NodeIndex a, NodeIndex b) const {
    std::vector<Edge> out;
    const auto lo = std::min(a, b), hi = std::max(a, b);
    if (has_arrow(lo, hi)) out.push_back({lo, hi, EdgeKind::Arrow});
    if (has_arrow(hi, lo)) out.push_back({hi, lo, EdgeKind::Arrow});
    if (has_dashed(lo, hi)) out.push_back({lo, hi, EdgeKind::Dashed});
    if (has_full(lo, hi)) out.push_back({lo, hi, EdgeKind::Full});
    return out;
}

std::vector<Edge> MixedGraph::edges() const {
    std::vector<Edge> out;
    for (NodeIndex a = 0; a < size(); ++a) {
        for (auto b : children_[a]) out.push_back({a, b, EdgeKind::Arrow});
        for (auto b : dashed_[a]) if (a < b) out.push_back({a, b, EdgeKind::Dashed});
        for (auto b : full_[a]) if (a < b) out.push_back({a, b, EdgeKind::Full});
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t MixedGraph::edge_count() const {
    std::size_t arrows = 0, undirected = 0;
    for (NodeIndex a = 0; a < size(); ++a) {
        arrows += children_[a].size();
        undirected += dashed_[a].size() + full_[a].size();
    }
    return arrows + undirected / 2;
}

bool MixedGraph::is_simple() const {
    for (NodeIndex a = 0; a < size(); ++a) {
        for (NodeIndex b = a + 1; b < size(); ++b) {
            if (edges_between(a, b).size() > 1) return false;
        }
    }
    return true;
}

NodeSet MixedGraph::anterior(NodeSet targets) const {
    NodeSet seen = targets;
    NodeSet frontier = targets;
    while (!frontier.empty()) {
        NodeSet next;
        for (auto x : frontier) next |= parents_[x] | full_[x];
        frontier = next - seen;
        seen |= frontier;
    }
    return seen;
}

MixedGraph MixedGraph::induced(NodeSet keep) const {
    std::vector<NodeIndex> old_to_new(size(), size());
    std::vector<std::string> names;
    for (auto i : keep) {
        old_to_new[i] = names.size();
        names.push_back(names_[i]);
    }
    MixedGraph out(std::move(names));
    for (const auto& e : edges()) {
        if (keep.contains(e.from) && keep.contains(e.to)) {
            out.add_edge(old_to_new[e.from], old_to_new[e.to], e.kind);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// RegressionGraph

NodeSet RegressionGraph::node_set(const std::vector<std::string>& names) const {
    NodeSet s;
    for (const auto& n : names) s.insert(index_of(n));
    return s;
}

NodeSet RegressionGraph::after(std::size_t j) const {
    NodeSet s;
    for (std::size_t b = j + 1; b < blocks_.size(); ++b) s |= blocks_[b];
    return s;
}

NodeSet RegressionGraph::before(std::size_t j) const {
    NodeSet s;
    for (std::size_t b = 0; b < j && b < blocks_.size(); ++b) s |= blocks_[b];
    return s;
}

BlockOrdering RegressionGraph::ordering() const {
    BlockOrdering o;
    o.split = split_;
    for (const auto& block : blocks_) {
        std::vector<std::string> names;
        for (auto i : block) names.push_back(name(i));
        o.blocks.push_back(std::move(names));
    }
    return o;
}

std::optional<Edge> RegressionGraph::edge_between(NodeIndex a, NodeIndex b) const {
    auto es = structure_.edges_between(a, b);
    if (es.empty()) return std::nullopt;
    return es.front();
}

namespace {

struct Blocks {
    std::vector<NodeSet> sets;
    std::vector<std::size_t> index;
};

Blocks resolve_blocks(const MixedGraph& g, const BlockOrdering& ordering) {
    if (ordering.split > ordering.blocks.size()) {
        throw Error(Errc::InvalidArgument, "block split index exceeds block count");
    }
    if (ordering.blocks.size() - ordering.split > 1) {
        throw Error(Errc::MultipleContextBlocks, "the context part must be a single block");
    }
    Blocks out;
    out.index.assign(g.size(), ordering.blocks.size());
    for (std::size_t j = 0; j < ordering.blocks.size(); ++j) {
        if (ordering.blocks[j].empty()) {
            throw Error(Errc::InvalidArgument, "block " + std::to_string(j + 1) + " is empty");
        }
        NodeSet s;
        for (const auto& name : ordering.blocks[j]) {
            auto i = g.index_of(name);
            if (out.index[i] != ordering.blocks.size()) {
                throw Error(Errc::DuplicateNode, "node '" + name + "' appears in more than one block");
            }
            out.index[i] = j;
            s.insert(i);
        }
        out.sets.push_back(s);
    }
    for (NodeIndex i = 0; i < g.size(); ++i) {
        if (out.index[i] == ordering.blocks.size()) {
            throw Error(Errc::NodeNotInAnyBlock, "node '" + g.name(i) + "' is not in any block");
        }
    }
    return out;
}

void check_edges(const MixedGraph& g, const Blocks& blocks, std::size_t split) {
    auto describe = [&](const Edge& e) {
        const char* sym = e.kind == EdgeKind::Arrow ? " -> " : e.kind == EdgeKind::Dashed ? " ~~ " : " -- ";
        return g.name(e.from) + sym + g.name(e.to);
    };
    for (NodeIndex a = 0; a < g.size(); ++a) {
        for (NodeIndex b = a + 1; b < g.size(); ++b) {
            if (g.edges_between(a, b).size() > 1) {
                throw Error(Errc::DuplicateEdge,
                            "more than one edge between '" + g.name(a) + "' and '" + g.name(b) + "'");
            }
        }
    }
    for (const auto& e : g.edges()) {
        const auto bf = blocks.index[e.from], bt = blocks.index[e.to];
        switch (e.kind) {
            case EdgeKind::Arrow:
                if (bf == bt) {
                    throw Error(Errc::EdgeKindViolatesBlocks, describe(e) + " joins nodes of one block");
                }
                if (bf < bt) throw Error(Errc::ArrowPointsToPast, describe(e));
                break;
            case EdgeKind::Dashed:
                if (bf != bt || bf >= split) {
                    throw Error(Errc::EdgeKindViolatesBlocks,
                                describe(e) + " must join two nodes of one response block");
                }
                break;
            case EdgeKind::Full:
                if (bf != bt || bf < split) {
                    throw Error(Errc::EdgeKindViolatesBlocks, describe(e) + " must join two context nodes");
                }
                break;
        }
    }
}

}  // namespace

RegressionGraph to_regression_graph(const MixedGraph& g, const BlockOrdering& ordering) {
    std::vector<NodeId> nodes;
    for (const auto& n : g.names()) nodes.push_back({n, n});
    std::vector<EdgeSpec> specs;
    for (const auto& e : g.edges()) specs.push_back({g.name(e.from), g.name(e.to), e.kind});
    return build_graph(nodes, ordering, specs);
}

RegressionGraph build_graph(const std::vector<NodeId>& nodes, const BlockOrdering& ordering,
                            const std::vector<EdgeSpec>& edges) {
    std::set<std::string> seen;
    for (const auto& n : nodes) {
        if (n.id.empty()) throw Error(Errc::InvalidArgument, "empty node id");
        if (!seen.insert(n.id).second) throw Error(Errc::DuplicateNode, "node '" + n.id + "' declared twice");
    }
    // Number nodes in block order so that equal graphs have equal indices.
    std::map<std::string, std::size_t> position;
    for (const auto& block : ordering.blocks) {
        for (const auto& id : block) {
            if (!seen.count(id)) throw Error(Errc::UnknownNode, "block member '" + id + "' is not a declared node");
            if (!position.emplace(id, position.size()).second) {
                throw Error(Errc::DuplicateNode, "node '" + id + "' appears in more than one block");
            }
        }
    }
    std::vector<NodeId> sorted = nodes;
    for (const auto& n : sorted) {
        if (!position.count(n.id)) throw Error(Errc::NodeNotInAnyBlock, "node '" + n.id + "' is not in any block");
    }
    std::sort(sorted.begin(), sorted.end(),
              [&](const NodeId& x, const NodeId& y) { return position[x.id] < position[y.id]; });
    std::vector<std::string> names;
    std::vector<std::string> labels;
    for (const auto& n : sorted) {
        names.push_back(n.id);
        labels.push_back(n.label.empty() ? n.id : n.label);
    }
    MixedGraph g(std::move(names));
    for (const auto& spec : edges) {
        auto a = g.index_of(spec.from);
        auto b = g.index_of(spec.to);
        if (a == b) throw Error(Errc::SelfEdge, "self-edge at '" + spec.from + "'");
        if (g.adjacent(a, b)) {
            throw Error(Errc::DuplicateEdge, "more than one edge between '" + spec.from + "' and '" + spec.to + "'");
        }
        if (spec.kind == EdgeKind::Arrow) {
            g.add_edge(a, b, EdgeKind::Arrow);
        } else {
            g.add_edge(std::min(a, b), std::max(a, b), spec.kind);
        }
    }
    auto blocks = resolve_blocks(g, ordering);
    check_edges(g, blocks, ordering.split);

    RegressionGraph out;
    out.structure_ = std::move(g);
    out.labels_ = std::move(labels);
    out.blocks_ = std::move(blocks.sets);
    out.block_index_ = std::move(blocks.index);
    out.split_ = ordering.split;
    return out;
}

std::optional<BlockOrdering> compatible_ordering(const MixedGraph& g) {
    const auto n = g.size();
    NodeSet context;
    for (NodeIndex i = 0; i < n; ++i) {
        const bool heads = !g.parents(i).empty() || !g.dashed_neighbors(i).empty();
        if (!heads) {
            context.insert(i);
        } else if (!g.full_neighbors(i).empty()) {
            return std::nullopt;
        }
    }
    if (!g.is_simple()) return std::nullopt;

    // Dashed-line components among responses.
    const NodeSet responses = g.all() - context;
    std::vector<NodeSet> comps;
    NodeSet unassigned = responses;
    while (!unassigned.empty()) {
        NodeSet comp = NodeSet::single(unassigned.front());
        NodeSet frontier = comp;
        while (!frontier.empty()) {
            NodeSet next;
            for (auto x : frontier) next |= g.dashed_neighbors(x);
            frontier = next - comp;
            comp |= frontier;
        }
        comps.push_back(comp);
        unassigned -= comp;
    }
    for (const auto& comp : comps) {
        for (auto x : comp) {
            if (g.children(x).intersects(comp)) return std::nullopt;
        }
    }
    // Place components whose response children are all placed; smallest member first.
    std::vector<NodeSet> order;
    std::vector<bool> placed(comps.size(), false);
    NodeSet placed_nodes;
    while (order.size() < comps.size()) {
        std::optional<std::size_t> pick;
        for (std::size_t c = 0; c < comps.size(); ++c) {
            if (placed[c]) continue;
            NodeSet kids;
            for (auto x : comps[c]) kids |= g.children(x);
            kids &= responses;
            if (kids.subset_of(placed_nodes)) {
                if (!pick || comps[c].front() < comps[*pick].front()) pick = c;
            }
        }
        if (!pick) return std::nullopt;
        placed[*pick] = true;
        placed_nodes |= comps[*pick];
        order.push_back(comps[*pick]);
    }

    BlockOrdering out;
    for (const auto& block : order) {
        std::vector<std::string> names;
        for (auto i : block) names.push_back(g.name(i));
        out.blocks.push_back(std::move(names));
    }
    out.split = out.blocks.size();
    if (!context.empty()) {
        std::vector<std::string> names;
        for (auto i : context) names.push_back(g.name(i));
        out.blocks.push_back(std::move(names));
    }
    return out;
}

std::vector<NodeSet> connected_components_undirected(const MixedGraph& g) {
    std::vector<NodeSet> out;
    NodeSet rest = g.all();
    while (!rest.empty()) {
        NodeSet comp = NodeSet::single(rest.front());
        NodeSet frontier = comp;
        while (!frontier.empty()) {
            NodeSet next;
            for (auto x : frontier) next |= g.dashed_neighbors(x) | g.full_neighbors(x);
            frontier = next - comp;
            comp |= frontier;
        }
        out.push_back(comp);
        rest -= comp;
    }
    return out;
}

std::vector<NodeSet> connected_components_undirected(const RegressionGraph& g) {
    return connected_components_undirected(g.structure());
}

namespace {

VForm classify(EndMark mi, EndMark mk) {
    // Normalize so that the "first" mark is the more tail-like one where it matters.
    auto is = [&](EndMark a, EndMark b) { return (mi == a && mk == b) || (mi == b && mk == a); };
    if (is(EndMark::Head, EndMark::Head)) return VForm::ArrowArrowCollision;
    if (is(EndMark::Dashed, EndMark::Head)) return VForm::DashedArrowCollision;
    if (is(EndMark::Dashed, EndMark::Dashed)) return VForm::DashedDashedCollision;
    if (is(EndMark::Tail, EndMark::Tail)) return VForm::CommonSource;
    if (is(EndMark::Tail, EndMark::Head)) return VForm::ArrowChain;
    if (is(EndMark::Tail, EndMark::Line)) return VForm::ArrowFullChain;
    if (is(EndMark::Line, EndMark::Line)) return VForm::FullFullChain;
    if (is(EndMark::Tail, EndMark::Dashed)) return VForm::ArrowDashedChain;
    throw std::logic_error("V shape outside the regression-graph class");
}

}  // namespace

std::vector<VConfiguration> enumerate_vs(const RegressionGraph& g) {
    const auto& s = g.structure();
    std::vector<VConfiguration> out;
    for (NodeIndex i = 0; i < g.size(); ++i) {
        for (NodeIndex k = i + 1; k < g.size(); ++k) {
            if (s.adjacent(i, k)) continue;
            const NodeSet inner = s.neighbors(i) & s.neighbors(k);
            for (auto o : inner) {
                const Edge ei = *g.edge_between(i, o);
                const Edge ek = *g.edge_between(k, o);
                VConfiguration v;
                v.i = i;
                v.o = o;
                v.k = k;
                v.end_i_at_o = end_at(ei, o);
                v.end_k_at_o = end_at(ek, o);
                v.end_at_i = end_at(ei, i);
                v.end_at_k = end_at(ek, k);
                v.kind = arrowhead_like(v.end_i_at_o) && arrowhead_like(v.end_k_at_o) ? VKind::Collision
                                                                                       : VKind::Transmitting;
                v.form = classify(v.end_i_at_o, v.end_k_at_o);
                out.push_back(v);
            }
        }
    }
    return out;
}

std::vector<NodeSet> collision_pairs(const RegressionGraph& g) {
    std::vector<NodeSet> out;
    for (const auto& v : enumerate_vs(g)) {
        if (v.kind != VKind::Collision) continue;
        NodeSet pair{v.i, v.k};
        if (out.empty() || out.back() != pair) out.push_back(pair);
    }
    return out;
}

std::vector<Factor> factorization(const RegressionGraph& g) {
    std::vector<Factor> out;
    for (std::size_t j = 0; j < g.blocks().size(); ++j) {
        Factor f;
        f.response = g.blocks()[j];
        if (j < g.response_block_count()) {
            f.conditioning = g.after(j);
            for (auto x : f.response) f.parents |= g.structure().parents(x);
        }
        out.push_back(f);
    }
    return out;
}

std::string format_nodes(const MixedGraph& g, NodeSet s) {
    std::string out;
    for (auto i : s) {
        if (!out.empty()) out += ',';
        out += g.name(i);
    }
    return out;
}

std::string format_factor(const RegressionGraph& g, const Factor& f, bool reduced) {
    const NodeSet given = reduced ? f.parents : f.conditioning;
    std::string out = "f_{" + format_nodes(g.structure(), f.response);
    if (!given.empty()) out += "|" + format_nodes(g.structure(), given);
    return out + "}";
}

std::vector<IndependenceStatement> defining_statements(const RegressionGraph& g) {
    std::vector<IndependenceStatement> out;
    const auto& s = g.structure();
    for (NodeIndex i = 0; i < g.size(); ++i) {
        for (NodeIndex k = i + 1; k < g.size(); ++k) {
            if (s.adjacent(i, k)) continue;
            const auto bi = g.block_of(i), bk = g.block_of(k);
            NodeSet c;
            if (bi == bk) {
                c = bi < g.response_block_count() ? g.after(bi) : g.context() - NodeSet{i, k};
            } else {
                // the earlier-block node is the response
                const auto later = bi < bk ? k : i;
                c = g.after(std::min(bi, bk)) - NodeSet::single(later);
            }
            out.push_back({NodeSet::single(i), NodeSet::single(k), c});
        }
    }
    return out;
}

}  // namespace rgraph
