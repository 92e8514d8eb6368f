#pragma once

#include <vector>

#include "rgraph/graph.hpp"
#include "rgraph/statement.hpp"

namespace rgraph {

/// How separation is decided. Both apply the same criterion: a path is active given c when
/// every collider (both path ends at the node arrowhead-like: an arrowhead or a dashed end)
/// is anterior to c and every other inner node lies outside c.
enum class SeparationMethod {
    Reachability,      // memoized walk search over (node, arrived-by-arrowhead) states
    PathEnumeration,   // brute-force simple paths; reference implementation
};

/// True iff every path between s.a and s.b is blocked by s.c.
bool implies(const MixedGraph& g, const IndependenceStatement& s,
             SeparationMethod method = SeparationMethod::Reachability);
bool implies(const RegressionGraph& g, const IndependenceStatement& s,
             SeparationMethod method = SeparationMethod::Reachability);

inline constexpr std::size_t kDefaultStructureBound = 8;

/// Every implied pairwise statement i ⊥ k | c (i < k uncoupled, c ⊆ N \ {i, k}),
/// ordered by pair then by conditioning mask. Throws GraphTooLarge above `max_nodes`.
std::vector<IndependenceStatement> implied_structure(const MixedGraph& g,
                                                     std::size_t max_nodes = kDefaultStructureBound);
std::vector<IndependenceStatement> implied_structure(const RegressionGraph& g,
                                                     std::size_t max_nodes = kDefaultStructureBound);

struct VWitness {
    NodeSet c;
    /// Whether i ⊥ k | c holds (true for collision Vs, false for transmitting Vs).
    bool separated_without_o = false;
};

/// Smallest c ⊆ N \ {i, o, k} (by size, then mask) for which a transmitting V separates
/// i, k given {o} ∪ c but not given c, or a collision V separates given c but not {o} ∪ c.
/// Throws NoWitnessFound if none exists.
VWitness v_witness(const RegressionGraph& g, const VConfiguration& v);

}  // namespace rgraph
