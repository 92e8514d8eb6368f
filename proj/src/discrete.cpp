#include "rgraph/discrete.hpp"

#include <cmath>
#include <numeric>

#include "rgraph/error.hpp"

namespace rgraph {

namespace {

/// Mixed-radix index of a full cell restricted to the members of `s`.
std::size_t sub_index(const std::vector<int>& cards, const std::vector<int>& cell, NodeSet s) {
    std::size_t idx = 0;
    for (auto v : s) idx = idx * static_cast<std::size_t>(cards[v]) + static_cast<std::size_t>(cell[v]);
    return idx;
}

std::size_t sub_size(const std::vector<int>& cards, NodeSet s) {
    std::size_t n = 1;
    for (auto v : s) n *= static_cast<std::size_t>(cards[v]);
    return n;
}

bool next_cell(const std::vector<int>& cards, std::vector<int>& cell) {
    for (std::size_t v = cards.size(); v-- > 0;) {
        if (++cell[v] < cards[v]) return true;
        cell[v] = 0;
    }
    return false;
}

}  // namespace

DiscretePMF::DiscretePMF(std::vector<int> cardinalities, std::vector<double> probabilities)
    : cards_(std::move(cardinalities)), p_(std::move(probabilities)) {
    if (cards_.empty() || cards_.size() > 5) throw Error(Errc::InvalidArgument, "tables need 1 to 5 variables");
    std::size_t cells = 1;
    for (int c : cards_) {
        if (c < 1 || c > 4) throw Error(Errc::InvalidArgument, "cardinalities must lie in 1..4");
        cells *= static_cast<std::size_t>(c);
    }
    if (p_.size() != cells) throw Error(Errc::InvalidArgument, "table size does not match the cardinalities");
    double total = 0.0;
    for (double x : p_) {
        if (!(x >= 0.0)) throw Error(Errc::InvalidArgument, "negative probability");
        total += x;
    }
    if (std::abs(total - 1.0) > 1e-12) throw Error(Errc::InvalidArgument, "probabilities do not sum to 1");
}

double DiscretePMF::at(const std::vector<int>& values) const {
    if (values.size() != cards_.size()) throw Error(Errc::InvalidArgument, "wrong number of values");
    return p_.at(sub_index(cards_, values, NodeSet::first(cards_.size())));
}

bool DiscretePMF::independent(NodeSet a, NodeSet b, NodeSet c, double tol) const {
    const NodeSet ac = a | c, bc = b | c, abc = a | b | c;
    std::vector<double> f_abc(sub_size(cards_, abc)), f_ac(sub_size(cards_, ac)), f_bc(sub_size(cards_, bc)),
        f_c(sub_size(cards_, c));
    std::vector<int> cell(cards_.size(), 0);
    std::size_t flat = 0;
    do {
        const double x = p_[flat++];
        f_abc[sub_index(cards_, cell, abc)] += x;
        f_ac[sub_index(cards_, cell, ac)] += x;
        f_bc[sub_index(cards_, cell, bc)] += x;
        f_c[sub_index(cards_, cell, c)] += x;
    } while (next_cell(cards_, cell));
    std::fill(cell.begin(), cell.end(), 0);
    do {
        const double lhs = f_abc[sub_index(cards_, cell, abc)] * f_c[sub_index(cards_, cell, c)];
        const double rhs = f_ac[sub_index(cards_, cell, ac)] * f_bc[sub_index(cards_, cell, bc)];
        if (std::abs(lhs - rhs) > tol) return false;
    } while (next_cell(cards_, cell));
    return true;
}

std::string_view property_name(TracingProperty p) {
    switch (p) {
        case TracingProperty::Composition: return "composition";
        case TracingProperty::Intersection: return "intersection";
        case TracingProperty::SingletonTransitivity: return "singleton-transitivity";
    }
    return "?";
}

std::vector<PropertyViolation> check_property(const DiscretePMF& p, TracingProperty property, double tol) {
    const std::size_t n = p.variables();
    std::vector<PropertyViolation> out;
    // Each variable goes to a, b, c, d or nowhere.
    std::vector<int> role(n, 0);
    while (true) {
        NodeSet a, b, c, d;
        for (std::size_t v = 0; v < n; ++v) {
            if (role[v] == 1) a.insert(v);
            if (role[v] == 2) b.insert(v);
            if (role[v] == 3) c.insert(v);
            if (role[v] == 4) d.insert(v);
        }
        const bool sized = property == TracingProperty::SingletonTransitivity
                               ? a.size() == 1 && b.size() == 1 && c.size() == 1 && a < b
                               : !a.empty() && !b.empty() && !c.empty();
        if (sized) {
            bool violated = false;
            switch (property) {
                case TracingProperty::Composition:
                    violated = p.independent(b, a, d, tol) && p.independent(b, c, d, tol) &&
                               !p.independent(b, a | c, d, tol);
                    break;
                case TracingProperty::Intersection:
                    violated = p.independent(b, a, c | d, tol) && p.independent(b, c, a | d, tol) &&
                               !p.independent(b, a | c, d, tol);
                    break;
                case TracingProperty::SingletonTransitivity:
                    violated = p.independent(a, b, d, tol) && p.independent(a, b, c | d, tol) &&
                               !p.independent(c, a, d, tol) && !p.independent(c, b, d, tol);
                    break;
            }
            if (violated) out.push_back({property, a, b, c, d});
        }
        std::size_t v = 0;
        while (v < n && ++role[v] == 5) role[v++] = 0;
        if (v == n) break;
    }
    return out;
}

DiscretePMF random_pmf(const std::vector<int>& cardinalities, std::mt19937_64& rng) {
    std::size_t cells = 1;
    for (int c : cardinalities) cells *= static_cast<std::size_t>(c);
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> p(cells);
    for (auto& x : p) x = expo(rng);
    const double total = std::accumulate(p.begin(), p.end(), 0.0);
    for (auto& x : p) x /= total;
    // Absorb rounding so the table sums to 1 within the constructor's tolerance.
    p.back() = std::max(0.0, 1.0 - std::accumulate(p.begin(), p.end() - 1, 0.0));
    return DiscretePMF(cardinalities, std::move(p));
}

DiscretePMF conditional_product_pmf(const std::vector<double>& w, const std::vector<double>& p,
                                    const std::vector<double>& q) {
    const int r = static_cast<int>(w.size());
    if (p.size() != w.size() || q.size() != w.size()) throw Error(Errc::InvalidArgument, "parameter lengths differ");
    std::vector<double> table;
    for (int i = 0; i < 2; ++i) {
        for (int k = 0; k < 2; ++k) {
            for (int o = 0; o < r; ++o) {
                const double pi = i ? p[o] : 1.0 - p[o];
                const double pk = k ? q[o] : 1.0 - q[o];
                table.push_back(w[o] * pi * pk);
            }
        }
    }
    return DiscretePMF({2, 2, r}, std::move(table));
}

namespace {

double grid_probability(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> step(1, 3);
    return step(rng) / 4.0;
}

}  // namespace

DiscretePMF random_binary_grid_pmf(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> w8(1, 7);
    const double w0 = w8(rng) / 8.0;
    return conditional_product_pmf({w0, 1.0 - w0}, {grid_probability(rng), grid_probability(rng)},
                                   {grid_probability(rng), grid_probability(rng)});
}

TransitivitySearch search_transitivity_violation(std::uint64_t seed, std::size_t max_trials) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> w8(1, 6);
    TransitivitySearch result;
    while (result.trials < max_trials) {
        ++result.trials;
        const int a = w8(rng);
        std::uniform_int_distribution<int> rest(1, 7 - a);
        const int b = rest(rng);
        const std::vector<double> w{a / 8.0, b / 8.0, (8 - a - b) / 8.0};
        std::vector<double> p(3), q(3);
        for (auto& x : p) x = grid_probability(rng);
        for (auto& x : q) x = grid_probability(rng);
        auto pmf = conditional_product_pmf(w, p, q);
        const auto violations = check_property(pmf, TracingProperty::SingletonTransitivity);
        // Only the configuration with o as the ternary variable is of interest here.
        for (const auto& v : violations) {
            if (v.c == NodeSet::single(2)) {
                result.counterexample = std::move(pmf);
                return result;
            }
        }
    }
    return result;
}

}  // namespace rgraph
