#include "rgraph/transform.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>
#include <stdexcept>

#include "rgraph/independence.hpp"

namespace rgraph {

namespace {

bool head_end(EndMark m) { return arrowhead_like(m); }

/// Edge induced between i and k by a non-collider o, from the marks the two path edges leave at i and k.
Edge induced_edge(NodeIndex i, EndMark at_i, NodeIndex k, EndMark at_k) {
    const bool hi = head_end(at_i), hk = head_end(at_k);
    if (hi && hk) return {std::min(i, k), std::max(i, k), EdgeKind::Dashed};
    if (hi) return {k, i, EdgeKind::Arrow};
    if (hk) return {i, k, EdgeKind::Arrow};
    if (at_i == EndMark::Line && at_k == EndMark::Line) return {std::min(i, k), std::max(i, k), EdgeKind::Full};
    throw std::logic_error("tail-tail path through a non-collider outside the context");
}

std::vector<NodeId> node_ids(const RegressionGraph& g, NodeSet keep) {
    std::vector<NodeId> out;
    for (auto i : keep) out.push_back({g.name(i), g.label(i)});
    return out;
}

std::vector<EdgeSpec> edge_specs(const MixedGraph& g) {
    std::vector<EdgeSpec> out;
    for (const auto& e : g.edges()) out.push_back({g.name(e.from), g.name(e.to), e.kind});
    return out;
}

BlockOrdering restricted_ordering(const RegressionGraph& g, NodeSet keep) {
    BlockOrdering out;
    for (std::size_t j = 0; j < g.blocks().size(); ++j) {
        std::vector<std::string> block;
        for (auto i : g.blocks()[j] & keep) block.push_back(g.name(i));
        if (block.empty()) continue;
        if (j < g.response_block_count()) ++out.split;
        out.blocks.push_back(std::move(block));
    }
    return out;
}

std::optional<RegressionGraph> try_build(const std::vector<NodeId>& nodes, const BlockOrdering& ordering,
                                         const MixedGraph& g) {
    try {
        return build_graph(nodes, ordering, edge_specs(g));
    } catch (const Error&) {
        return std::nullopt;
    }
}

/// Wraps a simple mixed graph, preferring the inherited ordering over a recomputed one.
std::optional<RegressionGraph> wrap(const RegressionGraph& original, NodeSet keep, const MixedGraph& g) {
    const auto nodes = node_ids(original, keep);
    if (auto r = try_build(nodes, restricted_ordering(original, keep), g)) return r;
    if (auto ordering = compatible_ordering(g)) return try_build(nodes, *ordering, g);
    return std::nullopt;
}

using NamedStatement = std::tuple<std::string, std::string, std::set<std::string>>;

std::set<NamedStatement> named_structure(const MixedGraph& g, std::size_t bound) {
    std::set<NamedStatement> out;
    for (const auto& s : implied_structure(g, bound)) {
        std::string a = g.name(s.a.front()), b = g.name(s.b.front());
        if (b < a) std::swap(a, b);
        std::set<std::string> c;
        for (auto x : s.c) c.insert(g.name(x));
        out.emplace(a, b, std::move(c));
    }
    return out;
}

std::set<NamedStatement> restricted_structure(const MixedGraph& g, NodeSet keep, std::size_t bound) {
    std::set<std::string> kept;
    for (auto i : keep) kept.insert(g.name(i));
    std::set<NamedStatement> out;
    for (auto& s : named_structure(g, bound)) {
        const auto& [a, b, c] = s;
        if (!kept.count(a) || !kept.count(b)) continue;
        if (std::all_of(c.begin(), c.end(), [&](const std::string& x) { return kept.count(x) > 0; })) out.insert(s);
    }
    return out;
}

}  // namespace

const RegressionGraph& InducedGraph::regression_graph() const {
    if (!graph) throw Error(Errc::NotARegressionGraph, "marginal graph is a summary graph outside the regression-graph class");
    return *graph;
}

InducedGraph marginalize(const RegressionGraph& g, NodeSet over, const MarginalizeOptions& opts) {
    if (!over.subset_of(g.all())) throw Error(Errc::UnknownNode, "marginalization set has unknown nodes");
    MixedGraph work = g.structure();
    NodeSet alive = g.all();
    for (auto o : over) {
        const NodeSet nbrs = work.neighbors(o) & alive;
        std::vector<Edge> induced;
        for (auto i : nbrs) {
            for (auto k : nbrs) {
                if (k <= i) continue;
                for (const auto& ei : work.edges_between(i, o)) {
                    for (const auto& ek : work.edges_between(k, o)) {
                        if (head_end(end_at(ei, o)) && head_end(end_at(ek, o))) continue;
                        induced.push_back(induced_edge(i, end_at(ei, i), k, end_at(ek, k)));
                    }
                }
            }
        }
        for (const auto& e : induced) work.add_edge(e.from, e.to, e.kind);
        alive.erase(o);
    }

    const NodeSet keep = g.all() - over;
    InducedGraph out;
    out.summary = work.induced(keep);
    if (out.summary.is_simple()) {
        out.graph = wrap(g, keep, out.summary);
        return out;
    }

    // Collapse multi-edges by precedence arrow > dashed > full, then certify.
    const auto& s = out.summary;
    MixedGraph collapsed(s.names());
    bool opposite_arrows = false;
    for (NodeIndex a = 0; a < s.size(); ++a) {
        for (NodeIndex b = a + 1; b < s.size(); ++b) {
            const auto between = s.edges_between(a, b);
            if (between.empty()) continue;
            if (between.size() > 1) out.collapsed_pairs.emplace_back(s.name(a), s.name(b));
            if (s.has_arrow(a, b) && s.has_arrow(b, a)) opposite_arrows = true;
            if (s.has_arrow(a, b)) collapsed.add_edge(a, b, EdgeKind::Arrow);
            else if (s.has_arrow(b, a)) collapsed.add_edge(b, a, EdgeKind::Arrow);
            else if (s.has_dashed(a, b)) collapsed.add_edge(a, b, EdgeKind::Dashed);
            else collapsed.add_edge(a, b, EdgeKind::Full);
        }
    }
    if (opposite_arrows || g.size() > opts.certification_bound) return out;
    auto candidate = wrap(g, keep, collapsed);
    if (!candidate) return out;
    if (named_structure(candidate->structure(), opts.certification_bound) ==
        restricted_structure(g.structure(), keep, opts.certification_bound)) {
        out.graph = std::move(candidate);
    }
    return out;
}

InducedGraph marginalize(const RegressionGraph& g, const MarginalSpec& spec, const MarginalizeOptions& opts) {
    if (!spec.condition.empty()) {
        throw Error(Errc::ConditioningNotSupported, "conditioning-set graph rewrites (C nonempty) are not supported");
    }
    return marginalize(g, spec.marginalize, opts);
}

InducedGraph marginalize(const RegressionGraph& g, const std::vector<std::string>& over,
                         const MarginalizeOptions& opts) {
    return marginalize(g, g.node_set(over), opts);
}

bool markov_equivalent(const RegressionGraph& g1, const RegressionGraph& g2) {
    std::set<std::string> n1(g1.names().begin(), g1.names().end()), n2(g2.names().begin(), g2.names().end());
    if (n1 != n2) throw Error(Errc::NodeSetMismatch, "graphs have different node sets");
    // Map g2 indices into g1 indices.
    std::vector<NodeIndex> map(g2.size());
    for (NodeIndex i = 0; i < g2.size(); ++i) map[i] = g1.index_of(g2.name(i));
    for (NodeIndex a = 0; a < g2.size(); ++a) {
        for (NodeIndex b = a + 1; b < g2.size(); ++b) {
            if (g2.adjacent(a, b) != g1.adjacent(map[a], map[b])) return false;
        }
    }
    using Collision = std::tuple<NodeIndex, NodeIndex, NodeIndex>;
    const auto key = [](NodeIndex i, NodeIndex o, NodeIndex k) { return Collision{std::min(i, k), o, std::max(i, k)}; };
    std::set<Collision> c1, c2;
    for (const auto& v : enumerate_vs(g1)) {
        if (v.kind == VKind::Collision) c1.insert(key(v.i, v.o, v.k));
    }
    for (const auto& v : enumerate_vs(g2)) {
        if (v.kind == VKind::Collision) c2.insert(key(map[v.i], map[v.o], map[v.k]));
    }
    return c1 == c2;
}

HiddenExpansion expand_hidden(const RegressionGraph& g, const std::vector<SelectedEdge>& edges) {
    struct Pick {
        NodeIndex a, b;
        EdgeKind kind;
        std::string latent;
    };
    std::vector<Pick> picks;
    std::set<std::string> taken(g.names().begin(), g.names().end());
    std::set<std::pair<NodeIndex, NodeIndex>> seen;
    for (const auto& sel : edges) {
        NodeIndex a = g.index_of(sel.a), b = g.index_of(sel.b);
        if (a > b) std::swap(a, b);
        const auto e = g.edge_between(a, b);
        if (!e || e->kind == EdgeKind::Arrow) {
            throw Error(Errc::EdgeNotDashed, "'" + sel.a + "' and '" + sel.b + "' are not joined by a dashed or full line");
        }
        if (!seen.insert({a, b}).second) continue;
        std::string latent = "L_" + g.name(a) + "_" + g.name(b);
        while (taken.count(latent)) latent += "'";
        taken.insert(latent);
        picks.push_back({a, b, e->kind, latent});
    }

    HiddenExpansion out;
    std::vector<std::string> names = g.names();
    for (const auto& p : picks) {
        names.push_back(p.latent);
        out.latents.push_back(p.latent);
    }
    out.graph = MixedGraph(names);
    std::set<std::pair<NodeIndex, NodeIndex>> removed;
    for (const auto& p : picks) removed.insert({p.a, p.b});
    for (const auto& e : g.edges()) {
        if (e.kind != EdgeKind::Arrow && removed.count({e.from, e.to})) continue;
        out.graph.add_edge(e.from, e.to, e.kind);
    }
    bool any_full = false;
    for (std::size_t t = 0; t < picks.size(); ++t) {
        const NodeIndex l = g.size() + t;
        out.graph.add_edge(l, picks[t].a, EdgeKind::Arrow);
        out.graph.add_edge(l, picks[t].b, EdgeKind::Arrow);
        any_full = any_full || picks[t].kind == EdgeKind::Full;
    }
    if (any_full) return out;

    // Each latent gets its own block right after the block of its pair.
    BlockOrdering ordering;
    std::vector<NodeId> nodes;
    for (NodeIndex i = 0; i < g.size(); ++i) nodes.push_back({g.name(i), g.label(i)});
    for (const auto& p : picks) nodes.push_back({p.latent, p.latent});
    for (std::size_t j = 0; j < g.blocks().size(); ++j) {
        std::vector<std::string> block;
        for (auto i : g.blocks()[j]) block.push_back(g.name(i));
        ordering.blocks.push_back(std::move(block));
        if (j < g.response_block_count()) ++ordering.split;
        for (const auto& p : picks) {
            if (g.block_of(p.a) == j) {
                ordering.blocks.push_back({p.latent});
                ++ordering.split;
            }
        }
    }
    out.regression = build_graph(nodes, ordering, edge_specs(out.graph));
    return out;
}

}  // namespace rgraph
