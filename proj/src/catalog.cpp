#include "rgraph/catalog.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <unordered_set>

namespace rgraph {

namespace {

// Pair states: 0 none, 1 arrow a->b, 2 arrow b->a, 3 dashed, 4 full (a < b).
constexpr int kStates = 5;

struct PairTable {
    std::size_t n = 0;
    std::vector<std::pair<int, int>> pairs;
    std::array<std::array<int, 8>, 8> index{};

    explicit PairTable(std::size_t nodes) : n(nodes) {
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = a + 1; b < n; ++b) {
                index[a][b] = index[b][a] = static_cast<int>(pairs.size());
                pairs.emplace_back(static_cast<int>(a), static_cast<int>(b));
            }
        }
    }
};

struct Masks {
    std::array<std::uint8_t, 8> in{}, out{}, dashed{}, full{};
};

Masks masks_of(const PairTable& t, const std::vector<int>& state) {
    Masks m;
    for (std::size_t p = 0; p < t.pairs.size(); ++p) {
        const auto [a, b] = t.pairs[p];
        switch (state[p]) {
            case 1: m.out[a] |= 1u << b; m.in[b] |= 1u << a; break;
            case 2: m.out[b] |= 1u << a; m.in[a] |= 1u << b; break;
            case 3: m.dashed[a] |= 1u << b; m.dashed[b] |= 1u << a; break;
            case 4: m.full[a] |= 1u << b; m.full[b] |= 1u << a; break;
            default: break;
        }
    }
    return m;
}

bool admits_ordering(std::size_t n, const Masks& m) {
    unsigned responses = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const bool heads = m.in[i] || m.dashed[i];
        if (heads && m.full[i]) return false;
        if (heads) responses |= 1u << i;
    }
    // Dashed components; no arrow inside one.
    std::vector<unsigned> comps;
    unsigned rest = responses;
    while (rest) {
        unsigned comp = rest & -rest, frontier = comp;
        while (frontier) {
            unsigned next = 0;
            for (std::size_t x = 0; x < n; ++x) {
                if (frontier >> x & 1u) next |= m.dashed[x];
            }
            frontier = next & ~comp;
            comp |= frontier;
        }
        for (std::size_t x = 0; x < n; ++x) {
            if ((comp >> x & 1u) && (m.out[x] & comp)) return false;
        }
        comps.push_back(comp);
        rest &= ~comp;
    }
    // Component graph must be acyclic.
    unsigned placed = 0;
    std::vector<bool> done(comps.size(), false);
    for (std::size_t round = 0; round < comps.size(); ++round) {
        bool progress = false;
        for (std::size_t c = 0; c < comps.size(); ++c) {
            if (done[c]) continue;
            unsigned kids = 0;
            for (std::size_t x = 0; x < n; ++x) {
                if (comps[c] >> x & 1u) kids |= m.out[x];
            }
            if ((kids & responses & ~placed) == 0) {
                done[c] = true;
                placed |= comps[c];
                progress = true;
            }
        }
        if (!progress) return false;
    }
    return true;
}

struct Code {
    std::uint32_t skeleton = 0;
    std::uint64_t full = 0;

    auto operator<=>(const Code&) const = default;
};

Code encode(const PairTable& t, const std::vector<int>& state, const std::array<int, 8>& perm) {
    std::vector<int> permuted(t.pairs.size(), 0);
    for (std::size_t p = 0; p < t.pairs.size(); ++p) {
        if (state[p] == 0) continue;
        const auto [a, b] = t.pairs[p];
        const int pa = perm[a], pb = perm[b];
        int s = state[p];
        if (pa > pb && (s == 1 || s == 2)) s = 3 - s;
        permuted[t.index[pa][pb]] = s;
    }
    Code c;
    for (std::size_t p = 0; p < permuted.size(); ++p) {
        if (permuted[p]) c.skeleton |= 1u << p;
        c.full = c.full * kStates + static_cast<std::uint64_t>(permuted[p]);
    }
    return c;
}

std::vector<int> decode(const PairTable& t, std::uint64_t full) {
    std::vector<int> state(t.pairs.size());
    for (std::size_t p = t.pairs.size(); p-- > 0;) {
        state[p] = static_cast<int>(full % kStates);
        full /= kStates;
    }
    return state;
}

RegressionGraph to_graph(const PairTable& t, const std::vector<int>& state) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < t.n; ++i) names.push_back(std::to_string(i + 1));
    MixedGraph g(names);
    for (std::size_t p = 0; p < t.pairs.size(); ++p) {
        const auto [a, b] = t.pairs[p];
        const auto ua = static_cast<NodeIndex>(a), ub = static_cast<NodeIndex>(b);
        switch (state[p]) {
            case 1: g.add_edge(ua, ub, EdgeKind::Arrow); break;
            case 2: g.add_edge(ub, ua, EdgeKind::Arrow); break;
            case 3: g.add_edge(ua, ub, EdgeKind::Dashed); break;
            case 4: g.add_edge(ua, ub, EdgeKind::Full); break;
            default: break;
        }
    }
    const auto ordering = compatible_ordering(g);
    if (!ordering) throw std::logic_error("catalog graph without a compatible ordering");
    return to_regression_graph(g, *ordering);
}

}  // namespace

std::vector<CatalogEntry> regression_graph_catalog(std::size_t n) {
    if (n == 0 || n > 5) throw Error(Errc::InvalidArgument, "catalog supports 1 to 5 nodes");
    const PairTable t(n);
    std::vector<std::array<int, 8>> perms;
    std::array<int, 8> perm{};
    std::iota(perm.begin(), perm.begin() + static_cast<long>(n), 0);
    do {
        perms.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.begin() + static_cast<long>(n)));

    std::unordered_set<std::uint64_t> seen;
    std::vector<Code> reps;
    std::vector<int> state(t.pairs.size(), 0);
    while (true) {
        if (admits_ordering(n, masks_of(t, state))) {
            const std::array<int, 8> identity = perms.front();
            const Code own = encode(t, state, identity);
            Code best = own;
            for (const auto& p : perms) best = std::min(best, encode(t, state, p));
            if (best == own && seen.insert(best.full).second) reps.push_back(best);
        }
        std::size_t p = 0;
        while (p < state.size() && ++state[p] == kStates) state[p++] = 0;
        if (p == state.size()) break;
    }
    std::sort(reps.begin(), reps.end());
    std::vector<CatalogEntry> out;
    out.reserve(reps.size());
    for (const auto& c : reps) out.push_back({to_graph(t, decode(t, c.full)), c.skeleton});
    return out;
}

std::vector<CatalogEntry> regression_graph_catalog_upto(std::size_t max_nodes) {
    std::vector<CatalogEntry> out;
    for (std::size_t n = 1; n <= max_nodes; ++n) {
        auto part = regression_graph_catalog(n);
        std::move(part.begin(), part.end(), std::back_inserter(out));
    }
    return out;
}

}  // namespace rgraph
