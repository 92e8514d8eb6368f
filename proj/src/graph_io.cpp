#include "rgraph/graph_io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace rgraph {

namespace {

struct Line {
    std::size_t number = 0;
    std::vector<std::string> tokens;
    std::string quoted;  // text of a trailing "..." token, if any
    bool has_quoted = false;
};

std::vector<Line> tokenize(std::string_view text) {
    std::vector<Line> out;
    std::size_t number = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++number;
        Line line;
        line.number = number;
        std::size_t pos = 0;
        while (pos < raw.size()) {
            const char ch = raw[pos];
            if (std::isspace(static_cast<unsigned char>(ch))) {
                ++pos;
            } else if (ch == '#') {
                break;
            } else if (ch == '"') {
                const auto close = raw.find('"', pos + 1);
                if (close == std::string::npos) {
                    throw Error(Errc::ParseError, "line " + std::to_string(number) + ": unterminated string");
                }
                line.quoted = raw.substr(pos + 1, close - pos - 1);
                line.has_quoted = true;
                pos = close + 1;
            } else {
                auto end = pos;
                while (end < raw.size() && !std::isspace(static_cast<unsigned char>(raw[end])) && raw[end] != '#') {
                    ++end;
                }
                line.tokens.push_back(raw.substr(pos, end - pos));
                pos = end;
            }
        }
        if (!line.tokens.empty()) out.push_back(std::move(line));
    }
    return out;
}

[[noreturn]] void fail(const Line& line, const std::string& what) {
    throw Error(Errc::ParseError, "line " + std::to_string(line.number) + ": " + what);
}

std::optional<EdgeKind> edge_op(std::string_view op) {
    if (op == "->") return EdgeKind::Arrow;
    if (op == "~~") return EdgeKind::Dashed;
    if (op == "--") return EdgeKind::Full;
    return std::nullopt;
}

std::string_view op_text(EdgeKind kind) {
    switch (kind) {
        case EdgeKind::Arrow: return "->";
        case EdgeKind::Dashed: return "~~";
        case EdgeKind::Full: return "--";
    }
    return "?";
}

BlockOrdering parse_blocks(const Line& line) {
    BlockOrdering o;
    std::vector<std::string> current;
    bool in_context = false;
    bool seen_context_marker = false;
    auto close_block = [&](bool allow_empty) {
        if (current.empty()) {
            if (!allow_empty) fail(line, "empty block in 'blocks:' header");
            return;
        }
        o.blocks.push_back(std::move(current));
        current.clear();
    };
    for (std::size_t t = 1; t < line.tokens.size(); ++t) {
        const auto& tok = line.tokens[t];
        if (tok == "|") {
            if (in_context) fail(line, "only one context block is allowed after '||'");
            close_block(false);
        } else if (tok == "||") {
            if (seen_context_marker) fail(line, "'||' may appear once");
            seen_context_marker = true;
            close_block(o.blocks.empty());
            in_context = true;
        } else {
            current.push_back(tok);
        }
    }
    if (seen_context_marker) {
        o.split = o.blocks.size();
        close_block(false);
    } else {
        close_block(false);
        o.split = o.blocks.size();
    }
    return o;
}

}  // namespace

RegressionGraph parse_graph_text(std::string_view text) {
    std::optional<BlockOrdering> ordering;
    std::vector<std::pair<std::string, std::string>> labels;
    std::vector<EdgeSpec> edges;
    for (const auto& line : tokenize(text)) {
        const auto& head = line.tokens.front();
        if (head == "blocks:") {
            if (ordering) fail(line, "duplicate 'blocks:' header");
            ordering = parse_blocks(line);
        } else if (head == "label") {
            if (line.tokens.size() != 2 || !line.has_quoted) fail(line, "expected: label NODE \"text\"");
            labels.emplace_back(line.tokens[1], line.quoted);
        } else if (line.tokens.size() == 3 && edge_op(line.tokens[1])) {
            edges.push_back({line.tokens[0], line.tokens[2], *edge_op(line.tokens[1])});
        } else {
            fail(line, "unrecognized line");
        }
    }
    if (!ordering) throw Error(Errc::ParseError, "missing 'blocks:' header");
    std::vector<NodeId> nodes;
    for (const auto& block : ordering->blocks) {
        for (const auto& n : block) nodes.push_back({n, n});
    }
    for (const auto& [id, label] : labels) {
        auto it = std::find_if(nodes.begin(), nodes.end(), [&](const NodeId& n) { return n.id == id; });
        if (it == nodes.end()) throw Error(Errc::UnknownNode, "label for unknown node '" + id + "'");
        it->label = label;
    }
    // Nodes are numbered in block order; build_graph reports duplicates.
    return build_graph(nodes, *ordering, edges);
}

std::string emit_graph_text(const RegressionGraph& g) {
    std::ostringstream out;
    out << "blocks:";
    for (std::size_t j = 0; j < g.blocks().size(); ++j) {
        if (j > 0 || j == g.response_block_count()) {
            out << (j == g.response_block_count() ? " ||" : " |");
        }
        for (auto i : g.blocks()[j]) out << ' ' << g.name(i);
    }
    out << '\n';
    for (NodeIndex i = 0; i < g.size(); ++i) {
        if (g.label(i) != g.name(i)) out << "label " << g.name(i) << " \"" << g.label(i) << "\"\n";
    }
    for (const auto& e : g.edges()) {
        out << g.name(e.from) << ' ' << op_text(e.kind) << ' ' << g.name(e.to) << '\n';
    }
    return out.str();
}

MixedGraph parse_mixed_text(std::string_view text) {
    std::optional<MixedGraph> g;
    std::vector<std::tuple<std::string, std::string, EdgeKind>> pending;
    for (const auto& line : tokenize(text)) {
        const auto& head = line.tokens.front();
        if (head == "nodes:" || head == "blocks:") {
            if (g) fail(line, "duplicate node header");
            std::vector<std::string> names;
            for (std::size_t t = 1; t < line.tokens.size(); ++t) {
                if (line.tokens[t] != "|" && line.tokens[t] != "||") names.push_back(line.tokens[t]);
            }
            g.emplace(std::move(names));
        } else if (head == "label") {
            continue;
        } else if (line.tokens.size() == 3 && edge_op(line.tokens[1])) {
            pending.emplace_back(line.tokens[0], line.tokens[2], *edge_op(line.tokens[1]));
        } else {
            fail(line, "unrecognized line");
        }
    }
    if (!g) throw Error(Errc::ParseError, "missing 'nodes:' header");
    for (const auto& [a, b, kind] : pending) {
        auto ia = g->index_of(a), ib = g->index_of(b);
        if (kind == EdgeKind::Arrow) {
            g->add_edge(ia, ib, kind);
        } else {
            g->add_edge(std::min(ia, ib), std::max(ia, ib), kind);
        }
    }
    return *g;
}

std::string emit_mixed_text(const MixedGraph& g) {
    std::ostringstream out;
    out << "nodes:";
    for (const auto& n : g.names()) out << ' ' << n;
    out << '\n';
    for (const auto& e : g.edges()) out << g.name(e.from) << ' ' << op_text(e.kind) << ' ' << g.name(e.to) << '\n';
    return out.str();
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::InvalidArgument, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::InvalidArgument, "cannot write '" + path + "'");
    out << content;
}

RegressionGraph read_graph_file(const std::string& path) { return parse_graph_text(read_text_file(path)); }

nlohmann::json to_json(const RegressionGraph& g) {
    nlohmann::json j;
    j["nodes"] = nlohmann::json::array();
    for (NodeIndex i = 0; i < g.size(); ++i) j["nodes"].push_back({{"id", g.name(i)}, {"label", g.label(i)}});
    const auto ordering = g.ordering();
    j["blocks"] = ordering.blocks;
    j["split"] = ordering.split;
    j["edges"] = nlohmann::json::array();
    for (const auto& e : g.edges()) {
        j["edges"].push_back({{"from", g.name(e.from)}, {"to", g.name(e.to)}, {"kind", edge_kind_name(e.kind)}});
    }
    return j;
}

nlohmann::json to_json(const MixedGraph& g) {
    nlohmann::json j;
    j["nodes"] = g.names();
    j["edges"] = nlohmann::json::array();
    for (const auto& e : g.edges()) {
        j["edges"].push_back({{"from", g.name(e.from)}, {"to", g.name(e.to)}, {"kind", edge_kind_name(e.kind)}});
    }
    return j;
}

RegressionGraph graph_from_json(const nlohmann::json& j) {
    try {
        std::vector<NodeId> nodes;
        for (const auto& n : j.at("nodes")) {
            nodes.push_back({n.at("id").get<std::string>(), n.value("label", std::string{})});
        }
        BlockOrdering ordering;
        ordering.blocks = j.at("blocks").get<std::vector<std::vector<std::string>>>();
        ordering.split = j.at("split").get<std::size_t>();
        std::vector<EdgeSpec> edges;
        for (const auto& e : j.at("edges")) {
            const auto kind = e.at("kind").get<std::string>();
            EdgeKind k;
            if (kind == "arrow") k = EdgeKind::Arrow;
            else if (kind == "dashed") k = EdgeKind::Dashed;
            else if (kind == "full") k = EdgeKind::Full;
            else throw Error(Errc::ParseError, "unknown edge kind '" + kind + "'");
            edges.push_back({e.at("from").get<std::string>(), e.at("to").get<std::string>(), k});
        }
        return build_graph(nodes, ordering, edges);
    } catch (const nlohmann::json::exception& ex) {
        throw Error(Errc::ParseError, ex.what());
    }
}

namespace {

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"' || ch == '\\') out += '\\';
        out += ch;
    }
    return out + "\"";
}

void dot_edges(std::ostringstream& out, const MixedGraph& g) {
    for (const auto& e : g.edges()) {
        out << "  " << quote(g.name(e.from)) << " -> " << quote(g.name(e.to));
        switch (e.kind) {
            case EdgeKind::Arrow: break;
            case EdgeKind::Dashed: out << " [dir=none, style=dashed]"; break;
            case EdgeKind::Full: out << " [dir=none]"; break;
        }
        out << ";\n";
    }
}

}  // namespace

std::string to_dot(const RegressionGraph& g) {
    std::ostringstream out;
    out << "digraph regression_graph {\n  rankdir=RL;\n";
    for (NodeIndex i = 0; i < g.size(); ++i) {
        out << "  " << quote(g.name(i));
        if (g.label(i) != g.name(i)) out << " [tooltip=" << quote(g.label(i)) << "]";
        out << ";\n";
    }
    for (const auto& block : g.blocks()) {
        out << "  { rank=same;";
        for (auto i : block) out << ' ' << quote(g.name(i)) << ';';
        out << " }\n";
    }
    dot_edges(out, g.structure());
    out << "}\n";
    return out.str();
}

std::string to_dot(const MixedGraph& g) {
    std::ostringstream out;
    out << "digraph summary_graph {\n  rankdir=RL;\n";
    for (const auto& n : g.names()) out << "  " << quote(n) << ";\n";
    dot_edges(out, g);
    out << "}\n";
    return out.str();
}

}  // namespace rgraph
