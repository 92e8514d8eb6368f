#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "rgraph/node_set.hpp"

namespace rgraph {

/// Joint probability table over a few discrete variables, first variable varying slowest.
class DiscretePMF {
public:
    DiscretePMF(std::vector<int> cardinalities, std::vector<double> probabilities);

    std::size_t variables() const { return cards_.size(); }
    const std::vector<int>& cardinalities() const { return cards_; }
    const std::vector<double>& table() const { return p_; }
    double at(const std::vector<int>& values) const;

    /// a ⊥ b | c, checked as f(abc) f(c) = f(ac) f(bc) on every cell within `tol`.
    bool independent(NodeSet a, NodeSet b, NodeSet c, double tol = 1e-12) const;

private:
    std::vector<int> cards_;
    std::vector<double> p_;
};

enum class TracingProperty { Composition, Intersection, SingletonTransitivity };

std::string_view property_name(TracingProperty p);

/// A failed implication. Composition: b ⊥ a | d and b ⊥ c | d without b ⊥ ac | d.
/// Intersection: b ⊥ a | cd and b ⊥ c | ad without b ⊥ ac | d.
/// Singleton transitivity: i = a, k = b, o = c; i ⊥ k | d and i ⊥ k | od without o ⊥ i | d or o ⊥ k | d.
struct PropertyViolation {
    TracingProperty property;
    NodeSet a, b, c, d;
};

/// Exhaustive over all disjoint set assignments (at most 5 variables, cardinalities at most 4).
std::vector<PropertyViolation> check_property(const DiscretePMF& p, TracingProperty property, double tol = 1e-12);

/// Uniform draw from the probability simplex of the given shape.
DiscretePMF random_pmf(const std::vector<int>& cardinalities, std::mt19937_64& rng);

/// Variables (i, k, o): o ~ w, and i, k binary and independent given o with
/// P(i = 1 | o) = p[o], P(k = 1 | o) = q[o].
DiscretePMF conditional_product_pmf(const std::vector<double>& w, const std::vector<double>& p,
                                    const std::vector<double>& q);

/// Binary (i, k, o) table of the conditional-product form with parameters on the grid {1/4, 1/2, 3/4},
/// so that marginal independences occur often.
DiscretePMF random_binary_grid_pmf(std::mt19937_64& rng);

struct TransitivitySearch {
    std::optional<DiscretePMF> counterexample;
    std::size_t trials = 0;
};

/// Randomized search over conditional-product tables with a ternary o for a singleton-transitivity
/// violation. Weights are multiples of 1/8 and conditional probabilities lie on {1/4, 1/2, 3/4},
/// so exact independences are representable in floating point.
TransitivitySearch search_transitivity_violation(std::uint64_t seed, std::size_t max_trials);

}  // namespace rgraph
