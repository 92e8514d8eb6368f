#include <toml.hpp>

#include "rgraph/error.hpp"
#include "rgraph/fitting.hpp"
#include "rgraph/graph_io.hpp"

namespace rgraph {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(Errc::ConfigError, what); }

std::vector<std::string> string_array(const toml::node& node, const std::string& key) {
    const auto* arr = node.as_array();
    if (!arr) bad("'" + key + "' must be an array of strings");
    std::vector<std::string> out;
    for (const auto& item : *arr) {
        const auto s = item.value<std::string>();
        if (!s) bad("'" + key + "' must contain only strings");
        out.push_back(*s);
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    return s;
}

}  // namespace

FitConfig parse_fit_config(std::string_view toml_text) {
    toml::table tbl;
    try {
        tbl = toml::parse(toml_text);
    } catch (const toml::parse_error& e) {
        bad(std::string("invalid TOML: ") + std::string(e.description()));
    }
    static const std::vector<std::string> known{"blocks",          "context",        "threshold",  "screening",
                                                "candidate_terms", "report_context", "standardize"};
    for (const auto& [key, value] : tbl) {
        if (std::find(known.begin(), known.end(), key.str()) == known.end()) bad("unknown key '" + std::string(key.str()) + "'");
    }

    FitConfig cfg;
    const auto* blocks = tbl["blocks"].as_array();
    if (!blocks || blocks->empty()) bad("'blocks' must be a nonempty array of string arrays");
    for (const auto& b : *blocks) cfg.blocks.push_back(string_array(b, "blocks"));
    for (const auto& b : cfg.blocks) {
        if (b.empty()) bad("'blocks' contains an empty block");
    }
    if (const auto* v = tbl.get("context")) {
        const auto flag = v->value<bool>();
        if (!flag) bad("'context' must be a boolean");
        cfg.has_context = *flag;
    }
    if (const auto* v = tbl.get("threshold")) {
        const auto t = v->value<double>();
        if (!t || !(*t > 0.0)) bad("'threshold' must be a positive number");
        cfg.threshold = *t;
    }
    if (const auto* v = tbl.get("screening")) {
        const auto flag = v->value<bool>();
        if (!flag) bad("'screening' must be a boolean");
        cfg.screening = *flag;
    }
    if (const auto* v = tbl.get("candidate_terms")) {
        for (const auto& entry : string_array(*v, "candidate_terms")) {
            const auto colon = entry.find(':');
            if (colon == std::string::npos) bad("candidate term '" + entry + "' must read 'RESPONSE: TERM'");
            const std::string response(trim(std::string_view(entry).substr(0, colon)));
            Term term;
            try {
                term = parse_term(trim(std::string_view(entry).substr(colon + 1)));
            } catch (const Error& e) {
                bad(e.what());
            }
            if (!term.nonlinear()) bad("candidate term '" + entry + "' must be a square or an interaction");
            cfg.candidate_terms[response].push_back(term);
        }
    }
    if (const auto* v = tbl.get("report_context")) cfg.report_context = string_array(*v, "report_context");
    if (const auto* v = tbl.get("standardize")) {
        const auto s = v->value<std::string>();
        if (!s) bad("'standardize' must be a string");
        cfg.standardize = *s;
    }
    return cfg;
}

FitConfig read_fit_config(const std::string& path) { return parse_fit_config(read_text_file(path)); }

}  // namespace rgraph
