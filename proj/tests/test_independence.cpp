#include <algorithm>

#include "doctest.h"

#include "rgraph/catalog.hpp"
#include "rgraph/graph_io.hpp"
#include "rgraph/independence.hpp"
#include "rgraph/statement.hpp"

using namespace rgraph;

namespace {

RegressionGraph fixture(const std::string& name) { return read_graph_file(std::string(RGRAPH_FIXTURES) + "/" + name); }

bool holds(const RegressionGraph& g, const std::string& text) { return implies(g, parse_statement(g.structure(), text)); }

}  // namespace

TEST_CASE("chain statements") {
    const auto g = fixture("chain5.txt");
    CHECK(holds(g, "1 _||_ 4 | 3"));
    CHECK(holds(g, "1,2 _||_ 4,5 | 3"));
    CHECK(holds(g, "2 _||_ 4 | 1,3,5"));
    CHECK(holds(g, "1 _||_ 3,4,5 | 2"));
    CHECK(holds(g, "1 _||_ 5 | 4"));
    CHECK_FALSE(holds(g, "1 _||_ 4"));
    CHECK_FALSE(holds(g, "1 _||_ 2 | 3,4,5"));
}

TEST_CASE("collision and its witness") {
    const auto g = parse_graph_text("blocks: o || i k\ni -> o\nk -> o\n");
    CHECK(holds(g, "i _||_ k"));
    CHECK_FALSE(holds(g, "i _||_ k | o"));
    const auto vs = enumerate_vs(g);
    REQUIRE(vs.size() == 1);
    const auto w = v_witness(g, vs[0]);
    CHECK(w.c.empty());
    CHECK(w.separated_without_o);
}

TEST_CASE("transmitting witnesses") {
    for (const char* text : {"blocks: i | o || k\no -> i\nk -> o\n", "blocks: || i o k\ni -- o\no -- k\n"}) {
        const auto g = parse_graph_text(text);
        CHECK(holds(g, "i _||_ k | o"));
        CHECK_FALSE(holds(g, "i _||_ k"));
        const auto vs = enumerate_vs(g);
        REQUIRE(vs.size() == 1);
        const auto w = v_witness(g, vs[0]);
        CHECK(w.c.empty());
        CHECK_FALSE(w.separated_without_o);
    }
}

TEST_CASE("dashed ends act as arrowheads") {
    const auto g = parse_graph_text("blocks: i o || k\ni ~~ o\nk -> o\n");
    CHECK(holds(g, "i _||_ k"));
    CHECK_FALSE(holds(g, "i _||_ k | o"));
    const auto d = parse_graph_text("blocks: a | b c || x\nb -> a\nb ~~ c\nx -> a\n");
    CHECK(holds(d, "c _||_ x"));
    CHECK_FALSE(holds(d, "c _||_ x | a"));
}

TEST_CASE("implied structure edge cases") {
    const auto two = parse_graph_text("blocks: || a b\n");
    CHECK(implied_structure(two).size() == 1);
    CHECK(implied_structure(parse_graph_text("blocks: || a b c\n")).size() == 6);
    const auto complete = parse_graph_text("blocks: a || b c\nb -> a\nc -> a\nb -- c\n");
    CHECK(implied_structure(complete).empty());
    const auto chain = fixture("chain5.txt");
    const auto st = implied_structure(chain);
    CHECK(std::find(st.begin(), st.end(), parse_statement(chain.structure(), "1 _||_ 5 | 4")) != st.end());
    CHECK_THROWS_AS(implied_structure(chain, 4), Error);
}

TEST_CASE("statement errors") {
    const auto g = fixture("chain5.txt");
    try {
        implies(g, parse_statement(g.structure(), "1 _||_ 1 | 2"));
        FAIL("expected NodesNotDisjoint");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NodesNotDisjoint);
    }
    try {
        parse_statement(g.structure(), "1 _||_ 9");
        FAIL("expected UnknownNode");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::UnknownNode);
    }
}

TEST_CASE("reachability agrees with path enumeration, symmetric, decomposition") {
    for (const auto& entry : regression_graph_catalog_upto(4)) {
        const auto& g = entry.graph;
        const auto n = g.size();
        for (NodeIndex i = 0; i < n; ++i) {
            for (NodeIndex k = 0; k < n; ++k) {
                if (i == k) continue;
                const auto rest = g.all() - NodeSet{i, k};
                for_each_subset(rest, [&](NodeSet c) {
                    const IndependenceStatement s{NodeSet{i}, NodeSet{k}, c};
                    const bool r = implies(g, s);
                    CHECK(r == implies(g, s, SeparationMethod::PathEnumeration));
                    CHECK(r == implies(g, IndependenceStatement{s.b, s.a, c}));
                    for (auto j : rest - c) {
                        const bool joint = implies(g, IndependenceStatement{NodeSet{i}, NodeSet{k, j}, c});
                        const bool split = implies(g, IndependenceStatement{NodeSet{i}, NodeSet{k}, c | NodeSet{j}}) &&
                                           implies(g, IndependenceStatement{NodeSet{i}, NodeSet{j}, c});
                        CHECK(joint == split);
                    }
                });
            }
        }
    }
}

TEST_CASE("defining statements are implied") {
    for (const auto& entry : regression_graph_catalog_upto(4)) {
        for (const auto& s : defining_statements(entry.graph)) CHECK(implies(entry.graph, s));
    }
    const auto g = fixture("mannheim.txt");
    for (const auto& s : defining_statements(g)) CHECK(implies(g, s));
}

TEST_CASE("every V has a witness") {
    for (const auto& entry : regression_graph_catalog_upto(4)) {
        for (const auto& v : enumerate_vs(entry.graph)) {
            const auto w = v_witness(entry.graph, v);
            CHECK(w.separated_without_o == (v.kind == VKind::Collision));
        }
    }
}
