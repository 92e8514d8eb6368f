#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"

#include "rgraph/catalog.hpp"
#include "rgraph/gauss_oracle.hpp"
#include "rgraph/graph_io.hpp"
#include "rgraph/independence.hpp"
#include "rgraph/statement.hpp"
#include "rgraph/transform.hpp"

using namespace rgraph;

namespace {

RegressionGraph fixture(const std::string& name) { return read_graph_file(std::string(RGRAPH_FIXTURES) + "/" + name); }

std::vector<Edge> between(const MixedGraph& g, const std::string& a, const std::string& b) {
    return g.edges_between(g.index_of(a), g.index_of(b));
}

/// Implied pairwise statements of `g` rendered by name, restricted to conditioning sets avoiding `drop`.
std::set<std::string> named_structure(const MixedGraph& g, NodeSet drop) {
    std::set<std::string> out;
    for (const auto& s : implied_structure(g, 12)) {
        if (s.a.intersects(drop) || s.b.intersects(drop) || s.c.intersects(drop)) continue;
        std::vector<std::string> c;
        for (auto x : s.c) c.push_back(g.name(x));
        std::sort(c.begin(), c.end());
        std::string a = g.name(s.a.front()), b = g.name(s.b.front());
        if (b < a) std::swap(a, b);
        std::string key = a + "|" + b + "|";
        for (const auto& x : c) key += x + ",";
        out.insert(key);
    }
    return out;
}

}  // namespace

TEST_CASE("single-node marginalization rules") {
    SUBCASE("i <- o <- k gives i <- k") {
        const auto r = marginalize(parse_graph_text("blocks: i | o || k\no -> i\nk -> o\n"), {"o"});
        REQUIRE(r.is_regression_graph());
        const auto e = between(r.summary, "i", "k");
        REQUIRE(e.size() == 1);
        CHECK(e[0].kind == EdgeKind::Arrow);
        CHECK(r.summary.name(e[0].from) == "k");
    }
    SUBCASE("i <- o -- k gives i <- k") {
        const auto r = marginalize(parse_graph_text("blocks: i || o k\no -> i\no -- k\n"), {"o"});
        REQUIRE(r.is_regression_graph());
        const auto e = between(r.summary, "i", "k");
        REQUIRE(e.size() == 1);
        CHECK(e[0].kind == EdgeKind::Arrow);
        CHECK(r.summary.name(e[0].from) == "k");
    }
    SUBCASE("i -- o -- k gives i -- k") {
        const auto r = marginalize(parse_graph_text("blocks: || i o k\ni -- o\no -- k\n"), {"o"});
        REQUIRE(r.is_regression_graph());
        const auto e = between(r.summary, "i", "k");
        REQUIRE(e.size() == 1);
        CHECK(e[0].kind == EdgeKind::Full);
    }
    SUBCASE("i <- o ~~ k gives i ~~ k") {
        const auto r = marginalize(parse_graph_text("blocks: i | o k\no -> i\no ~~ k\n"), {"o"});
        const auto e = between(r.summary, "i", "k");
        REQUIRE(e.size() == 1);
        CHECK(e[0].kind == EdgeKind::Dashed);
        REQUIRE(r.is_regression_graph());
        CHECK(r.regression_graph().blocks().size() == 1);
    }
    SUBCASE("i <- o -> k gives i ~~ k") {
        const auto r = marginalize(parse_graph_text("blocks: i k || o\no -> i\no -> k\n"), {"o"});
        REQUIRE(r.is_regression_graph());
        const auto e = between(r.summary, "i", "k");
        REQUIRE(e.size() == 1);
        CHECK(e[0].kind == EdgeKind::Dashed);
    }
    SUBCASE("collision Vs induce nothing") {
        const auto r = marginalize(parse_graph_text("blocks: o || i k\ni -> o\nk -> o\n"), {"o"});
        REQUIRE(r.is_regression_graph());
        CHECK(r.summary.edge_count() == 0);
    }
}

TEST_CASE("marginalizing the cognitive responses gives the induced subgraph") {
    const auto g = fixture("mannheim.txt");
    const auto r = marginalize(g, {"Y8", "Y4"});
    REQUIRE(r.is_regression_graph());
    const auto keep = g.all() - g.node_set({"Y8", "Y4"});
    CHECK(r.summary == g.structure().induced(keep));
    CHECK(r.regression_graph() == fixture("mannheim_without_y.txt"));
}

TEST_CASE("marginalizing the motoric responses adds two arrows") {
    const auto g = fixture("mannheim.txt");
    const auto r = marginalize(g, {"X8", "X4"});
    REQUIRE(r.is_regression_graph());
    const auto& m = r.regression_graph();
    CHECK(m == fixture("mannheim_without_x.txt"));
    const auto sub = g.structure().induced(g.all() - g.node_set({"X8", "X4"}));
    std::vector<std::pair<std::string, std::string>> added;
    for (const auto& e : m.edges()) {
        if (!sub.edges_between(sub.index_of(m.name(e.from)), sub.index_of(m.name(e.to))).empty()) continue;
        CHECK(e.kind == EdgeKind::Arrow);
        added.emplace_back(m.name(e.from), m.name(e.to));
    }
    std::sort(added.begin(), added.end());
    CHECK(added == std::vector<std::pair<std::string, std::string>>{{"Xr", "Y8"}, {"Yr", "Y8"}});
    CHECK(m.edges().size() == sub.edge_count() + 2);
}

TEST_CASE("marginalizing nothing is the identity") {
    for (const auto& entry : regression_graph_catalog_upto(4)) {
        const auto r = marginalize(entry.graph, NodeSet{});
        REQUIRE(r.is_regression_graph());
        CHECK(r.regression_graph() == entry.graph);
    }
}

TEST_CASE("conditioning is rejected") {
    const auto g = fixture("chain5.txt");
    try {
        marginalize(g, MarginalSpec{g.node_set({"1"}), g.node_set({"2"})});
        FAIL("expected ConditioningNotSupported");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::ConditioningNotSupported);
    }
}

TEST_CASE("marginalization preserves the independence structure") {
    std::size_t checked = 0, summaries = 0;
    for (const auto& entry : regression_graph_catalog_upto(5)) {
        const auto& g = entry.graph;
        const auto n = g.size();
        for (NodeIndex a = 0; a < n; ++a) {
            for (NodeIndex b = a; b < n; ++b) {
                const NodeSet m{a, b};
                if (m.size() == n) continue;
                const auto r = marginalize(g, m);
                if (!r.is_regression_graph()) {
                    ++summaries;
                    continue;
                }
                ++checked;
                const auto expected = named_structure(g.structure(), m);
                const auto got = named_structure(r.regression_graph().structure(), NodeSet{});
                CHECK(got == expected);
                CHECK(named_structure(r.summary, NodeSet{}) == expected);
            }
        }
    }
    CHECK(checked > 10000);
    MESSAGE("checked " << checked << " marginals, " << summaries << " left the class");
}

TEST_CASE("stepwise marginalization is Markov equivalent to joint marginalization") {
    for (const auto& entry : regression_graph_catalog(4)) {
        const auto& g = entry.graph;
        for (NodeIndex a = 0; a < 4; ++a) {
            for (NodeIndex b = 0; b < 4; ++b) {
                if (a == b) continue;
                const auto step1 = marginalize(g, NodeSet{a});
                if (!step1.is_regression_graph()) continue;
                const auto step2 = marginalize(step1.regression_graph(), {g.name(b)});
                const auto joint = marginalize(g, NodeSet{a, b});
                if (!step2.is_regression_graph() || !joint.is_regression_graph()) continue;
                CHECK(markov_equivalent(step2.regression_graph(), joint.regression_graph()));
            }
        }
    }
}

TEST_CASE("Markov equivalence examples") {
    const auto col = parse_graph_text("blocks: o || i k\ni -> o\nk -> o\n");
    const auto dashed_col = parse_graph_text("blocks: i o || k\ni ~~ o\nk -> o\n");
    const auto chain = parse_graph_text("blocks: i | o || k\no -> i\nk -> o\n");
    const auto source = parse_graph_text("blocks: i k || o\no -> i\no -> k\n");
    CHECK(markov_equivalent(col, dashed_col));
    CHECK(markov_equivalent(chain, source));
    CHECK_FALSE(markov_equivalent(col, chain));
    CHECK_FALSE(markov_equivalent(chain, parse_graph_text("blocks: i | o || k\no -> i\n")));

    const auto twice = parse_graph_text("blocks: 3 | 2 4 || 1\n2 -> 3\n2 ~~ 4\n1 -> 3\n1 -> 4\n");
    const auto once = parse_graph_text("blocks: 3 | 1 || 2 4\n1 -> 3\n2 -> 3\n2 -- 4\n4 -> 1\n");
    CHECK_FALSE(markov_equivalent(twice, once));
    CHECK_FALSE(implies(twice, parse_statement(twice.structure(), "1 _||_ 2 | 4")));
    CHECK(implies(once, parse_statement(once.structure(), "1 _||_ 2 | 4")));
    try {
        markov_equivalent(col, parse_graph_text("blocks: o || i x\n"));
        FAIL("expected NodeSetMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NodeSetMismatch);
    }
}

TEST_CASE("Markov equivalence is an equivalence relation on a sample") {
    const auto cat = regression_graph_catalog(3);
    std::vector<RegressionGraph> gs;
    for (const auto& e : cat) gs.push_back(e.graph);
    for (const auto& a : gs) {
        CHECK(markov_equivalent(a, a));
        for (const auto& b : gs) {
            CHECK(markov_equivalent(a, b) == markov_equivalent(b, a));
            if (!markov_equivalent(a, b)) continue;
            for (const auto& c : gs) {
                if (markov_equivalent(b, c)) CHECK(markov_equivalent(a, c));
            }
        }
    }
}

TEST_CASE("hidden common source for a dashed line") {
    const auto g = parse_graph_text("blocks: i k || x\ni ~~ k\nx -> i\n");
    const auto h = expand_hidden(g, {{"i", "k"}});
    REQUIRE(h.in_regression_class());
    REQUIRE(h.latents.size() == 1);
    const auto& x = h.regression->structure();
    const auto l = x.index_of(h.latents[0]);
    CHECK(x.has_arrow(l, x.index_of("i")));
    CHECK(x.has_arrow(l, x.index_of("k")));
    CHECK_FALSE(x.adjacent(x.index_of("i"), x.index_of("k")));
    const auto back = marginalize(*h.regression, h.latents);
    REQUIRE(back.is_regression_graph());
    CHECK(markov_equivalent(back.regression_graph(), g));

    const auto same = expand_hidden(g, {});
    REQUIRE(same.in_regression_class());
    CHECK(*same.regression == g);
}

TEST_CASE("hidden expansion of every dashed line is reversible") {
    const auto g = fixture("mannheim.txt");
    const auto h = expand_hidden(g, {{"Y8", "X8"}, {"Y4", "X4"}});
    REQUIRE(h.in_regression_class());
    const auto back = marginalize(*h.regression, h.latents);
    REQUIRE(back.is_regression_graph());
    CHECK(markov_equivalent(back.regression_graph(), g));
}

TEST_CASE("hidden expansion rejects arrows and missing edges") {
    const auto g = fixture("mannheim.txt");
    for (std::vector<SelectedEdge> bad : {std::vector<SelectedEdge>{{"Y4", "Y8"}}, std::vector<SelectedEdge>{{"Y8", "Yr"}}}) {
        try {
            expand_hidden(g, bad);
            FAIL("expected EdgeNotDashed");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::EdgeNotDashed);
        }
    }
}

TEST_CASE("hidden source for a context full line leaves the class") {
    const auto g = fixture("mannheim.txt");
    const auto h = expand_hidden(g, {{"E", "Xr"}});
    CHECK_FALSE(h.in_regression_class());
    REQUIRE(h.latents.size() == 1);
    const auto l = h.graph.index_of(h.latents[0]);
    CHECK(h.graph.has_arrow(l, h.graph.index_of("E")));
    CHECK(h.graph.has_arrow(l, h.graph.index_of("Xr")));
    CHECK_FALSE(h.graph.adjacent(h.graph.index_of("E"), h.graph.index_of("Xr")));
}

TEST_CASE("latent common source of the context block reproduces the graph's independences") {
    const auto g = fixture("mannheim.txt");
    const auto n = g.size();
    const auto idx = [&](const char* name) { return g.index_of(name); };
    const auto implied = implied_structure(g);
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> mag(0.3, 0.9);
        auto coef = [&] { return (rng() & 1U ? 1.0 : -1.0) * mag(rng); };
        const NodeIndex lat = n;
        Matrix b = Matrix::Zero(n + 1, n + 1);
        for (const auto& e : g.edges()) {
            if (e.kind == EdgeKind::Arrow) b(e.to, e.from) = coef();
        }
        b(idx("E"), lat) = coef();
        b(idx("Xr"), lat) = coef();
        b(idx("Yr"), idx("E")) = coef();
        b(idx("H"), idx("Xr")) = coef();
        Matrix omega = Matrix::Identity(n + 1, n + 1);
        for (auto [a, c] : {std::pair{"Y8", "X8"}, std::pair{"Y4", "X4"}}) {
            omega(idx(a), idx(c)) = omega(idx(c), idx(a)) = 0.4 * coef();
        }
        const Matrix full = sem_covariance(b, omega);
        const Matrix s = full.topLeftCorner(n, n);
        std::size_t nonzero = 0, pairs = 0;
        for (NodeIndex i = 0; i < n; ++i) {
            for (NodeIndex k = i + 1; k < n; ++k) {
                for_each_subset(g.all() - NodeSet{i, k}, [&](NodeSet c) {
                    const IndependenceStatement st{NodeSet{i}, NodeSet{k}, c};
                    const bool is_implied = std::find(implied.begin(), implied.end(), st) != implied.end();
                    const double rho = std::abs(partial_correlation(s, i, k, c));
                    if (is_implied) {
                        CHECK(rho < 1e-10);
                    } else {
                        ++pairs;
                        nonzero += rho > 1e-6;
                    }
                });
            }
        }
        CHECK(nonzero == pairs);
    }
}
