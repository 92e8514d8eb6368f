#include "rgraph/statement.hpp"

#include <algorithm>
#include <cctype>

namespace rgraph {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

NodeSet parse_nodes(const MixedGraph& g, std::string_view text) {
    text = trim(text);
    if (!text.empty() && text.front() == '{') {
        if (text.back() != '}') throw Error(Errc::ParseError, "unbalanced braces in '" + std::string(text) + "'");
        text = trim(text.substr(1, text.size() - 2));
    }
    NodeSet out;
    while (!text.empty()) {
        const auto comma = text.find(',');
        const auto item = trim(text.substr(0, comma));
        if (item.empty()) throw Error(Errc::ParseError, "empty node name in statement");
        out.insert(g.index_of(item));
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

}  // namespace

IndependenceStatement parse_statement(const MixedGraph& g, std::string_view text) {
    constexpr std::string_view sep = "_||_";
    const auto at = text.find(sep);
    if (at == std::string_view::npos) {
        throw Error(Errc::ParseError, "expected 'A _||_ B | C', got '" + std::string(text) + "'");
    }
    const auto lhs = text.substr(0, at);
    auto rhs = text.substr(at + sep.size());
    std::string_view cond;
    if (const auto bar = rhs.find('|'); bar != std::string_view::npos) {
        cond = rhs.substr(bar + 1);
        rhs = rhs.substr(0, bar);
    }
    IndependenceStatement s{parse_nodes(g, lhs), parse_nodes(g, rhs), parse_nodes(g, cond)};
    if (s.a.empty() || s.b.empty()) throw Error(Errc::ParseError, "both sides of '_||_' need nodes");
    return s;
}

std::string format_statement(const MixedGraph& g, const IndependenceStatement& s) {
    std::string out = format_nodes(g, s.a) + " _||_ " + format_nodes(g, s.b);
    if (!s.c.empty()) out += " | " + format_nodes(g, s.c);
    return out;
}

}  // namespace rgraph
