#include <algorithm>
#include <set>

#include "doctest.h"

#include "rgraph/catalog.hpp"
#include "rgraph/graph.hpp"
#include "rgraph/graph_io.hpp"
#include "rgraph/statement.hpp"

using namespace rgraph;

namespace {

RegressionGraph fixture(const std::string& name) { return read_graph_file(std::string(RGRAPH_FIXTURES) + "/" + name); }

Errc build_error(const std::string& text) {
    try {
        parse_graph_text(text);
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error for: " << text);
    return Errc::InvalidArgument;
}

std::vector<std::string> names_of(const RegressionGraph& g, NodeSet s) {
    std::vector<std::string> out;
    for (auto x : s) out.push_back(g.name(x));
    return out;
}

}  // namespace

TEST_CASE("chain with one node per block is valid") {
    const auto g = fixture("chain5.txt");
    CHECK(g.size() == 5);
    CHECK(g.blocks().size() == 5);
    CHECK(g.edges().size() == 4);
    CHECK(g.structure().has_arrow(g.index_of("2"), g.index_of("1")));
}

TEST_CASE("edgeless graph is valid") {
    const auto g = parse_graph_text("blocks: a b | c || d e\n");
    CHECK(g.edges().empty());
    CHECK(g.context().size() == 2);
}

TEST_CASE("build_graph rejects malformed graphs") {
    CHECK(build_error("blocks: a || b c\nb ~~ c\n") == Errc::EdgeKindViolatesBlocks);
    CHECK(build_error("blocks: a b || c\na -- b\n") == Errc::EdgeKindViolatesBlocks);
    CHECK(build_error("blocks: a | b || c\na ~~ b\n") == Errc::EdgeKindViolatesBlocks);
    CHECK(build_error("blocks: a | b || c\na -> b\n") == Errc::ArrowPointsToPast);
    CHECK(build_error("blocks: a || b\nb -> a\na -> b\n") == Errc::DuplicateEdge);
    CHECK(build_error("blocks: a || b\nb -> a\nb -> a\n") == Errc::DuplicateEdge);
    CHECK(build_error("blocks: a || b\nc -> a\n") == Errc::UnknownNode);
    CHECK(build_error("blocks: a || b\na -> a\n") == Errc::SelfEdge);
    CHECK(build_error("blocks: a a || b\n") == Errc::DuplicateNode);
    CHECK(build_error("blocks: a || b || c\n") == Errc::ParseError);
    CHECK(build_error("a -> b\n") == Errc::ParseError);

    BlockOrdering ord{{{"a"}, {"b"}}, 1};
    try {
        build_graph({{"a", ""}, {"b", ""}, {"c", ""}}, ord, {});
        FAIL("expected NodeNotInAnyBlock");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NodeNotInAnyBlock);
    }
    try {
        build_graph({{"a", ""}, {"b", ""}, {"c", ""}}, BlockOrdering{{{"a"}, {"b"}, {"c"}}, 1}, {});
        FAIL("expected MultipleContextBlocks");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::MultipleContextBlocks);
    }
}

TEST_CASE("arrows may skip response blocks") {
    const auto g = parse_graph_text("blocks: a | b | c || d\nc -> a\nd -> a\nd -> b\n");
    CHECK(g.edges().size() == 3);
}

TEST_CASE("connected components after deleting arrows") {
    const auto g = fixture("mannheim.txt");
    const auto comps = connected_components_undirected(g);
    REQUIRE(comps.size() == 3);
    CHECK(names_of(g, comps[0]) == std::vector<std::string>{"Y8", "X8"});
    CHECK(names_of(g, comps[1]) == std::vector<std::string>{"Y4", "X4"});
    CHECK(names_of(g, comps[2]) == std::vector<std::string>{"Yr", "Xr", "E", "H"});

    CHECK(connected_components_undirected(parse_graph_text("blocks: 1 2 3\n")).size() == 3);
    CHECK(connected_components_undirected(fixture("chain5.txt")).size() == 5);
}

TEST_CASE("components partition the nodes for every catalog graph") {
    for (const auto& entry : regression_graph_catalog_upto(4)) {
        NodeSet seen;
        for (auto c : connected_components_undirected(entry.graph)) {
            CHECK_FALSE(c.intersects(seen));
            seen |= c;
        }
        CHECK(seen == entry.graph.all());
    }
}

TEST_CASE("V classification") {
    auto single_v = [](const std::string& text) {
        const auto vs = enumerate_vs(parse_graph_text(text));
        REQUIRE(vs.size() == 1);
        return vs.front();
    };
    auto v = single_v("blocks: o || i k\ni -> o\nk -> o\n");
    CHECK(v.kind == VKind::Collision);
    CHECK(v.form == VForm::ArrowArrowCollision);

    v = single_v("blocks: i | o || k\no -> i\nk -> o\n");
    CHECK(v.kind == VKind::Transmitting);
    CHECK(v.form == VForm::ArrowChain);

    v = single_v("blocks: i o || k\ni ~~ o\nk -> o\n");
    CHECK(v.kind == VKind::Collision);
    CHECK(v.form == VForm::DashedArrowCollision);

    v = single_v("blocks: i o k\ni ~~ o\no ~~ k\n");
    CHECK(v.form == VForm::DashedDashedCollision);
    v = single_v("blocks: i || o k\no -> i\no -- k\n");
    CHECK(v.form == VForm::ArrowFullChain);
    CHECK(v.kind == VKind::Transmitting);
    v = single_v("blocks: || i o k\ni -- o\no -- k\n");
    CHECK(v.form == VForm::FullFullChain);
    v = single_v("blocks: i | o k\no -> i\no ~~ k\n");
    CHECK(v.form == VForm::ArrowDashedChain);
    v = single_v("blocks: i k || o\no -> i\no -> k\n");
    CHECK(v.form == VForm::CommonSource);
    CHECK(v.kind == VKind::Transmitting);
}

TEST_CASE("V classification is exhaustive over the catalog") {
    std::set<VForm> collision, transmitting;
    for (const auto& entry : regression_graph_catalog_upto(4)) {
        const auto& s = entry.graph.structure();
        for (const auto& v : enumerate_vs(entry.graph)) {
            CHECK_FALSE(s.adjacent(v.i, v.k));
            CHECK(s.adjacent(v.i, v.o));
            CHECK(s.adjacent(v.k, v.o));
            const bool col = arrowhead_like(v.end_i_at_o) && arrowhead_like(v.end_k_at_o);
            CHECK(col == (v.kind == VKind::Collision));
            (col ? collision : transmitting).insert(v.form);
        }
    }
    CHECK(collision.size() == 3);
    CHECK(transmitting.size() == 5);
}

TEST_CASE("factorization") {
    const auto chain = fixture("chain5.txt");
    std::vector<std::string> reduced;
    for (const auto& f : factorization(chain)) reduced.push_back(format_factor(chain, f, true));
    CHECK(reduced == std::vector<std::string>{"f_{1|2}", "f_{2|3}", "f_{3|4}", "f_{4|5}", "f_{5}"});

    const auto g = fixture("mannheim.txt");
    std::vector<std::string> full;
    for (const auto& f : factorization(g)) full.push_back(format_factor(g, f, false));
    CHECK(full == std::vector<std::string>{"f_{Y8,X8|Y4,X4,Yr,Xr,E,H}", "f_{Y4,X4|Yr,Xr,E,H}", "f_{Yr,Xr,E,H}"});

    const auto v_only = parse_graph_text("blocks: || a b c\na -- b\n");
    const auto fs = factorization(v_only);
    REQUIRE(fs.size() == 1);
    CHECK(fs[0].response == v_only.all());
    CHECK(fs[0].conditioning.empty());
}

TEST_CASE("factor responses cover every node exactly once") {
    for (const auto& entry : regression_graph_catalog_upto(4)) {
        NodeSet seen;
        for (const auto& f : factorization(entry.graph)) {
            CHECK_FALSE(f.response.intersects(seen));
            CHECK_FALSE(f.response.intersects(f.conditioning));
            seen |= f.response;
        }
        CHECK(seen == entry.graph.all());
    }
}

TEST_CASE("defining statements") {
    const auto chain = fixture("chain5.txt");
    const auto& s = chain.structure();
    const auto stmts = defining_statements(chain);
    auto has = [&](const std::string& text) {
        return std::find(stmts.begin(), stmts.end(), parse_statement(s, text)) != stmts.end();
    };
    CHECK(stmts.size() == 6);
    CHECK(has("1 _||_ 3 | 2,4,5"));
    CHECK(has("1 _||_ 4 | 2,3,5"));
    CHECK(has("1 _||_ 5 | 2,3,4"));
    CHECK(has("2 _||_ 4 | 3,5"));
    CHECK(has("2 _||_ 5 | 3,4"));
    CHECK(has("3 _||_ 5 | 4"));

    const auto g = fixture("mannheim.txt");
    const auto gs = defining_statements(g);
    CHECK(std::find(gs.begin(), gs.end(), parse_statement(g.structure(), "X8 _||_ Y4 | X4,Yr,Xr,E,H")) != gs.end());
    CHECK(gs.size() == 13);

    CHECK(defining_statements(parse_graph_text("blocks: a | b || c d\nb -> a\nc -> a\nd -> a\nc -> b\nd -> b\nc -- d\n"))
              .empty());
}

TEST_CASE("one defining statement per missing edge") {
    for (const auto& entry : regression_graph_catalog_upto(4)) {
        const auto& g = entry.graph;
        std::size_t missing = 0;
        for (NodeIndex i = 0; i < g.size(); ++i) {
            for (NodeIndex k = i + 1; k < g.size(); ++k) missing += !g.adjacent(i, k);
        }
        const auto stmts = defining_statements(g);
        CHECK(stmts.size() == missing);
        for (const auto& st : stmts) {
            CHECK(st.a.size() == 1);
            CHECK(st.b.size() == 1);
            CHECK_FALSE(g.adjacent(st.a.front(), st.b.front()));
        }
    }
}

TEST_CASE("text and JSON round trips") {
    const auto g = fixture("mannheim.txt");
    CHECK(parse_graph_text(emit_graph_text(g)) == g);
    CHECK(graph_from_json(to_json(g)) == g);
    CHECK(g.label(g.index_of("E")) == "unprotective environment, 3 months");
    const auto dot = to_dot(g);
    CHECK(dot.find("style=dashed") != std::string::npos);
    for (const auto& entry : regression_graph_catalog(4)) {
        CHECK(parse_graph_text(emit_graph_text(entry.graph)) == entry.graph);
    }
}

TEST_CASE("mixed text round trip") {
    MixedGraph m({"a", "b", "c"});
    m.add_edge(1, 0, EdgeKind::Arrow);
    m.add_edge(0, 1, EdgeKind::Dashed);
    m.add_edge(1, 2, EdgeKind::Full);
    CHECK_FALSE(m.is_simple());
    CHECK(parse_mixed_text(emit_mixed_text(m)) == m);
}

TEST_CASE("compatible ordering recovers a valid block structure") {
    for (const auto& entry : regression_graph_catalog_upto(4)) {
        const auto ord = compatible_ordering(entry.graph.structure());
        REQUIRE(ord.has_value());
        CHECK(to_regression_graph(entry.graph.structure(), *ord).edges().size() == entry.graph.edges().size());
    }
    MixedGraph cyc({"a", "b"});
    cyc.add_edge(0, 1, EdgeKind::Arrow);
    cyc.add_edge(0, 1, EdgeKind::Dashed);
    CHECK_FALSE(compatible_ordering(cyc).has_value());
}
