#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "json.hpp"

#include "rgraph/graph.hpp"

namespace rgraph {

// Text format, one item per line ('#' starts a comment):
//
//   blocks: Y8 X8 | Y4 X4 || Yr Xr E H     response blocks g_1 | g_2 ..., then || context block
//   label Y8 "cognitive deficits, 8 years"  optional display label
//   Y4 -> Y8                                arrow
//   Y8 ~~ X8                                dashed line
//   E -- Yr                                 full line
//
// Summary graphs that are not regression graphs use "nodes: a b c" instead of "blocks:" and
// may list several edges for one pair.

RegressionGraph parse_graph_text(std::string_view text);
std::string emit_graph_text(const RegressionGraph& g);

MixedGraph parse_mixed_text(std::string_view text);
std::string emit_mixed_text(const MixedGraph& g);

RegressionGraph read_graph_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);
std::string read_text_file(const std::string& path);

nlohmann::json to_json(const RegressionGraph& g);
RegressionGraph graph_from_json(const nlohmann::json& j);
nlohmann::json to_json(const MixedGraph& g);

/// DOT: solid arrows for arrows, dashed undirected for dashed lines, solid undirected for full lines.
std::string to_dot(const RegressionGraph& g);
std::string to_dot(const MixedGraph& g);

}  // namespace rgraph
