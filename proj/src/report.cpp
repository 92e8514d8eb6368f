#include "rgraph/report.hpp"

#include <cstdio>
#include <filesystem>
#include <sstream>

#include "rgraph/graph_io.hpp"

namespace rgraph {

namespace {

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    std::string s = buf;
    return s == "-0.00" ? "0.00" : s;
}

const TermEstimate* find_estimate(const FittedModel& m, const Term& t) {
    for (const auto& e : m.terms) {
        if (e.term == t) return &e;
    }
    return nullptr;
}

const ExcludedTerm* find_excluded(const RegressionTable& table, const Term& t) {
    for (const auto& e : table.excluded) {
        if (e.term == t) return &e;
    }
    return nullptr;
}

void table_markdown(std::ostringstream& out, const RegressionTable& t) {
    out << "### Response " << t.response << "\n\n";
    out << "| explanatory variable | start coeff | start s_coeff | start z_obs | selected coeff | selected s_coeff "
           "| selected z_obs | excluded z'_obs |\n";
    out << "|---|---:|---:|---:|---:|---:|---:|---:|\n";
    out << "| constant | " << num(t.start.intercept) << " | | | " << num(t.selected.intercept) << " | | | |\n";
    for (const auto& s : t.start.terms) {
        out << "| " << s.term.name() << " | " << num(s.coeff) << " | " << num(s.s_coeff) << " | " << num(s.z) << " | ";
        if (const auto* sel = find_estimate(t.selected, s.term)) {
            out << num(sel->coeff) << " | " << num(sel->s_coeff) << " | " << num(sel->z) << " | |\n";
        } else {
            const auto* ex = find_excluded(t, s.term);
            out << "| | | " << (ex ? num(ex->z_prime) : std::string()) << " |\n";
        }
    }
    out << "\nR²_full = " << num(t.r2_full()) << ", selected model " << t.response << ": " << wilkinson(t)
        << ", R²_sel = " << num(t.r2_sel()) << ", n = " << t.n << "\n\n";
    if (!t.trace.empty()) {
        out << "Selection steps:";
        for (std::size_t i = 0; i < t.trace.size(); ++i) {
            const auto& s = t.trace[i];
            out << (i ? "," : "") << ' '
                << (s.action == SelectionStep::Action::Delete ? "delete " : "re-enter ") << s.term.name() << " (z = "
                << num(s.z) << ")";
        }
        out << "\n\n";
    }
}

}  // namespace

std::string markdown_report(const FitResult& r) {
    std::ostringstream out;
    out << "# Fitted regression graph\n\n";
    out << "## Fitted equations\n\n";
    out << "| Response | Selected model | R²_full | R²_sel |\n|---|---|---:|---:|\n";
    for (const auto& t : r.tables) {
        out << "| " << t.response << " | " << wilkinson(t) << " | " << num(t.r2_full()) << " | " << num(t.r2_sel()) << " |\n";
    }
    out << "\nA square or interaction term implies its main effects.\n\n";
    out << "## Regression tables\n\n";
    for (const auto& t : r.tables) table_markdown(out, t);
    if (!r.dashed.empty()) {
        out << "## Dependences within response blocks\n\n| pair | z_obs | dashed line |\n|---|---:|---|\n";
        for (const auto& d : r.dashed) {
            out << "| " << d.r1 << ", " << d.r2 << " | " << num(d.z) << " | " << (d.present ? "yes" : "no") << " |\n";
        }
        out << "\n";
    }
    if (!r.full.empty()) {
        out << "## Dependences among context variables\n\n| pair | z (first on rest) | z (second on rest) | full line |\n"
               "|---|---:|---:|---|\n";
        for (const auto& f : r.full) {
            out << "| " << f.a << ", " << f.b << " | " << num(f.z_ab) << " | " << num(f.z_ba) << " | "
                << (f.present ? "yes" : "no") << " |\n";
        }
        out << "\n";
    }
    out << "## Graph\n\n```\n" << emit_graph_text(r.graph) << "```\n";
    return out.str();
}

nlohmann::json table_json(const RegressionTable& t) {
    auto model = [](const FittedModel& m) {
        nlohmann::json j;
        j["intercept"] = m.intercept;
        j["r2"] = m.r2;
        j["terms"] = nlohmann::json::array();
        for (const auto& e : m.terms) {
            j["terms"].push_back({{"term", e.term.name()}, {"coeff", e.coeff}, {"s_coeff", e.s_coeff}, {"z_obs", e.z}});
        }
        return j;
    };
    nlohmann::json j;
    j["response"] = t.response;
    j["n"] = t.n;
    j["threshold"] = t.threshold;
    j["start"] = model(t.start);
    j["selected"] = model(t.selected);
    j["wilkinson"] = wilkinson(t);
    j["r2_full"] = t.r2_full();
    j["r2_sel"] = t.r2_sel();
    j["excluded"] = nlohmann::json::array();
    for (const auto& e : t.excluded) j["excluded"].push_back({{"term", e.term.name()}, {"z_prime", e.z_prime}});
    j["trace"] = nlohmann::json::array();
    for (const auto& s : t.trace) {
        j["trace"].push_back({{"action", s.action == SelectionStep::Action::Delete ? "delete" : "reenter"},
                              {"term", s.term.name()},
                              {"z", s.z}});
    }
    return j;
}

nlohmann::json report_json(const FitResult& r) {
    nlohmann::json j;
    j["tables"] = nlohmann::json::array();
    for (const auto& t : r.tables) j["tables"].push_back(table_json(t));
    j["dashed"] = nlohmann::json::array();
    for (const auto& d : r.dashed) j["dashed"].push_back({{"r1", d.r1}, {"r2", d.r2}, {"z_obs", d.z}, {"present", d.present}});
    j["full"] = nlohmann::json::array();
    for (const auto& f : r.full) {
        j["full"].push_back({{"a", f.a}, {"b", f.b}, {"z_ab", f.z_ab}, {"z_ba", f.z_ba}, {"present", f.present}});
    }
    j["graph"] = to_json(r.graph);
    return j;
}

void write_fit_report(const FitResult& r, const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(Errc::InvalidArgument, "cannot create '" + dir + "': " + ec.message());
    const std::filesystem::path base(dir);
    write_text_file((base / "tables.md").string(), markdown_report(r));
    write_text_file((base / "report.json").string(), report_json(r).dump(2) + "\n");
    write_text_file((base / "graph.txt").string(), emit_graph_text(r.graph));
    write_text_file((base / "graph.dot").string(), to_dot(r.graph));
}

}  // namespace rgraph
