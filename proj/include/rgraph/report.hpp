#pragma once

#include <string>

#include "json.hpp"

#include "rgraph/fitting.hpp"

namespace rgraph {

/// Summary of fitted equations followed by one table per response (starting model, selected
/// model, z' of excluded terms), the selection traces and the edge tests.
std::string markdown_report(const FitResult& r);

nlohmann::json report_json(const FitResult& r);
nlohmann::json table_json(const RegressionTable& t);

/// Writes tables.md, report.json, graph.txt and graph.dot into `dir` (created if needed).
void write_fit_report(const FitResult& r, const std::string& dir);

}  // namespace rgraph
