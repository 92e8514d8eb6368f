#include "rgraph/independence.hpp"

#include <algorithm>
#include <functional>

namespace rgraph {

namespace {

void validate(const MixedGraph& g, const IndependenceStatement& s) {
    const NodeSet all = g.all();
    if (!(s.a | s.b | s.c).subset_of(all)) throw Error(Errc::UnknownNode, "statement mentions unknown nodes");
    if (s.a.empty() || s.b.empty()) throw Error(Errc::InvalidArgument, "both sides of a statement must be nonempty");
    if (s.a.intersects(s.b) || s.a.intersects(s.c) || s.b.intersects(s.c)) {
        throw Error(Errc::NodesNotDisjoint, "statement sets must be pairwise disjoint");
    }
}

bool connected_by_reachability(const MixedGraph& g, NodeSet a, NodeSet b, NodeSet c) {
    const NodeSet ant = g.anterior(c);
    // seen_head: reached with an arrowhead-like mark; seen_tail: otherwise (or as a start node).
    NodeSet seen_head, seen_tail = a;
    NodeSet todo_head, todo_tail = a;
    while (!todo_head.empty() || !todo_tail.empty()) {
        if ((todo_head | todo_tail).intersects(b)) return true;
        NodeSet next_head, next_tail;
        for (auto x : todo_tail) {
            if (c.contains(x) && !a.contains(x)) continue;
            next_head |= g.children(x) | g.dashed_neighbors(x);
            next_tail |= g.full_neighbors(x) | g.parents(x);
        }
        for (auto x : todo_head) {
            if (!c.contains(x)) {
                // leaving by a tail end: non-collider
                next_head |= g.children(x);
                next_tail |= g.full_neighbors(x);
            }
            // leaving by an arrowhead-like end: collider
            if (ant.contains(x)) {
                next_head |= g.dashed_neighbors(x);
                next_tail |= g.parents(x);
            }
        }
        todo_head = next_head - seen_head;
        todo_tail = next_tail - seen_tail;
        seen_head |= todo_head;
        seen_tail |= todo_tail;
    }
    return false;
}

bool connected_by_paths(const MixedGraph& g, NodeSet a, NodeSet b, NodeSet c) {
    const NodeSet ant = g.anterior(c);
    // DFS over simple paths; `in_mark` is the mark at x of the edge used to reach it.
    std::function<bool(NodeIndex, std::optional<EndMark>, NodeSet)> extend =
        [&](NodeIndex x, std::optional<EndMark> in_mark, NodeSet visited) -> bool {
        for (auto y : g.neighbors(x) - visited) {
            for (const auto& e : g.edges_between(x, y)) {
                const EndMark out_mark = end_at(e, x);
                if (in_mark) {
                    const bool collider = arrowhead_like(*in_mark) && arrowhead_like(out_mark);
                    if (collider ? !ant.contains(x) : c.contains(x)) continue;
                }
                if (b.contains(y)) return true;
                if (extend(y, end_at(e, y), visited | NodeSet::single(y))) return true;
            }
        }
        return false;
    };
    for (auto x : a) {
        if (extend(x, std::nullopt, NodeSet::single(x))) return true;
    }
    return false;
}

}  // namespace

bool implies(const MixedGraph& g, const IndependenceStatement& s, SeparationMethod method) {
    validate(g, s);
    const bool connected = method == SeparationMethod::Reachability ? connected_by_reachability(g, s.a, s.b, s.c)
                                                                    : connected_by_paths(g, s.a, s.b, s.c);
    return !connected;
}

bool implies(const RegressionGraph& g, const IndependenceStatement& s, SeparationMethod method) {
    return implies(g.structure(), s, method);
}

std::vector<IndependenceStatement> implied_structure(const MixedGraph& g, std::size_t max_nodes) {
    if (g.size() > max_nodes) {
        throw Error(Errc::GraphTooLarge, std::to_string(g.size()) + " nodes exceed the enumeration bound of " +
                                             std::to_string(max_nodes));
    }
    std::vector<IndependenceStatement> out;
    for (NodeIndex i = 0; i < g.size(); ++i) {
        for (NodeIndex k = i + 1; k < g.size(); ++k) {
            if (g.adjacent(i, k)) continue;
            const NodeSet a = NodeSet::single(i), b = NodeSet::single(k);
            for_each_subset(g.all() - (a | b), [&](NodeSet c) {
                if (!connected_by_reachability(g, a, b, c)) out.push_back({a, b, c});
            });
        }
    }
    return out;
}

std::vector<IndependenceStatement> implied_structure(const RegressionGraph& g, std::size_t max_nodes) {
    return implied_structure(g.structure(), max_nodes);
}

VWitness v_witness(const RegressionGraph& g, const VConfiguration& v) {
    const auto& s = g.structure();
    if (v.i >= g.size() || v.o >= g.size() || v.k >= g.size() || s.adjacent(v.i, v.k) ||
        !s.adjacent(v.i, v.o) || !s.adjacent(v.k, v.o)) {
        throw Error(Errc::InvalidArgument, "not a V of this graph");
    }
    const NodeSet a = NodeSet::single(v.i), b = NodeSet::single(v.k), o = NodeSet::single(v.o);
    std::vector<NodeSet> candidates;
    for_each_subset(g.all() - (a | b | o), [&](NodeSet c) { candidates.push_back(c); });
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](NodeSet x, NodeSet y) { return x.size() < y.size(); });
    for (auto c : candidates) {
        const bool without = !connected_by_reachability(s, a, b, c);
        const bool with = !connected_by_reachability(s, a, b, c | o);
        const bool ok = v.kind == VKind::Transmitting ? (with && !without) : (without && !with);
        if (ok) return {c, without};
    }
    throw Error(Errc::NoWitnessFound, "no conditioning set witnesses the V (" + g.name(v.i) + ", " + g.name(v.o) +
                                          ", " + g.name(v.k) + ")");
}

}  // namespace rgraph
