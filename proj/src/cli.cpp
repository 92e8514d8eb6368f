#include "rgraph/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "rgraph/gauss_oracle.hpp"
#include "rgraph/graph_io.hpp"
#include "rgraph/independence.hpp"
#include "rgraph/report.hpp"
#include "rgraph/simulate.hpp"
#include "rgraph/transform.hpp"

namespace rgraph::cli {

namespace {

struct Globals {
    bool json = false;
    std::uint64_t seed = 1;
    double tol = 1e-10;
};

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

void emit(std::ostream& out, const std::string& path, const std::string& content) {
    if (path.empty()) {
        out << content;
    } else {
        write_text_file(path, content);
    }
}

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

nlohmann::json statement_json(const MixedGraph& g, const IndependenceStatement& s) {
    auto names = [&](NodeSet set) {
        std::vector<std::string> v;
        for (auto x : set) v.push_back(g.name(x));
        return v;
    };
    return {{"a", names(s.a)}, {"b", names(s.b)}, {"c", names(s.c)}, {"text", format_statement(g, s)}};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Regression graphs: validation, independence queries, transformations, oracles and fitting", "rg"};
    app.require_subcommand(1);
    Globals g;
    app.add_flag("--json", g.json, "Machine-readable output");
    app.add_option("--seed", g.seed, "Random seed (oracle base seed, simulation seed)");
    app.add_option("--tol", g.tol, "Zero tolerance for oracle partial correlations");

    std::string graph_path, graph_path2, statement, over, condition, output, method = "reachability";
    std::string data_path, config_path, format = "summary";
    std::vector<std::string> expand_edges;
    std::size_t max_nodes = kDefaultStructureBound, seeds = 5, n = 347;
    double nonzero_tol = 1e-6;

    auto* validate = app.add_subcommand("validate", "Check a graph file against the regression-graph rules");
    validate->add_option("graph", graph_path, "Graph text file")->required();

    auto* implies_cmd = app.add_subcommand("implies", "Decide whether the graph implies 'A _||_ B | C'");
    implies_cmd->add_option("graph", graph_path, "Graph text file")->required();
    implies_cmd->add_option("statement", statement, "Statement, e.g. \"1 _||_ 4 | 3\"")->required();
    implies_cmd->add_option("--method", method, "reachability or paths")->check(CLI::IsMember({"reachability", "paths"}));

    auto* structure = app.add_subcommand("structure", "List every implied pairwise independence");
    structure->add_option("graph", graph_path, "Graph text file")->required();
    structure->add_option("--max-nodes", max_nodes, "Enumeration bound");

    auto* marg = app.add_subcommand("marginalize", "Marginalize over a node set");
    marg->add_option("graph", graph_path, "Graph text file")->required();
    marg->add_option("--over", over, "Comma-separated nodes to marginalize over")->required();
    marg->add_option("--condition", condition, "Comma-separated nodes to condition on (not supported)");
    marg->add_option("-o,--output", output, "Output file");
    auto* marg_dot = marg->add_flag("--dot", "Emit DOT instead of the text format");

    auto* equiv = app.add_subcommand("equiv", "Decide Markov equivalence of two graphs");
    equiv->add_option("graph1", graph_path, "First graph")->required();
    equiv->add_option("graph2", graph_path2, "Second graph")->required();

    auto* expand = app.add_subcommand("expand", "Replace undirected edges by hidden common sources");
    expand->add_option("graph", graph_path, "Graph text file")->required();
    expand->add_option("--edge", expand_edges, "Edge as A,B (repeatable)");
    expand->add_option("-o,--output", output, "Output file");

    auto* oracle = app.add_subcommand("oracle", "Certify the graph criterion against exact Gaussian models");
    oracle->add_option("graph", graph_path, "Graph text file")->required();
    oracle->add_option("--seeds", seeds, "Number of random parameterizations");
    oracle->add_option("--nonzero-tol", nonzero_tol, "Threshold for non-implied partial correlations");

    auto* simulate = app.add_subcommand("simulate", "Simulate the child-development example data");
    simulate->add_option("--n", n, "Sample size");
    simulate->add_option("-o,--output", output, "Output CSV file");

    auto* fit = app.add_subcommand("fit", "Select regressions and build a regression graph from data");
    fit->add_option("data", data_path, "CSV file")->required();
    fit->add_option("--config", config_path, "TOML configuration")->required();
    fit->add_option("-o,--output", output, "Report directory");

    auto* report = app.add_subcommand("report", "Describe a graph: blocks, factorization, Vs, defining independences");
    report->add_option("graph", graph_path, "Graph text file")->required();
    report->add_option("--format", format, "summary, text, json or dot")->check(CLI::IsMember({"summary", "text", "json", "dot"}));

    for (auto* sub : {validate, implies_cmd, structure, marg, equiv, expand, oracle, simulate, fit, report}) sub->fallthrough();

    try {
        std::vector<std::string> rest(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
        app.parse(rest);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kTrue;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kTrue;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n" << app.help();
        return kUsage;
    }

    try {
        if (validate->parsed()) {
            RegressionGraph graph;
            try {
                graph = read_graph_file(graph_path);
            } catch (const Error& e) {
                if (e.code() == Errc::InvalidArgument) throw;
                if (g.json) out << nlohmann::json{{"valid", false}, {"error", e.what()}}.dump() << "\n";
                else out << "invalid: " << e.what() << "\n";
                return kFalse;
            }
            if (g.json) {
                out << nlohmann::json{{"valid", true}, {"graph", to_json(graph)}}.dump() << "\n";
            } else {
                out << "valid: " << graph.size() << " nodes, " << graph.blocks().size() << " blocks, "
                    << graph.edges().size() << " edges\n";
            }
            return kTrue;
        }
        if (implies_cmd->parsed()) {
            const auto graph = read_graph_file(graph_path);
            const auto s = parse_statement(graph.structure(), statement);
            const bool result = implies(graph, s, method == "paths" ? SeparationMethod::PathEnumeration
                                                                    : SeparationMethod::Reachability);
            if (g.json) {
                auto j = statement_json(graph.structure(), s);
                j["implied"] = result;
                out << j.dump() << "\n";
            } else {
                out << (result ? "true" : "false") << "\n";
            }
            return result ? kTrue : kFalse;
        }
        if (structure->parsed()) {
            const auto graph = read_graph_file(graph_path);
            const auto all = implied_structure(graph, max_nodes);
            if (g.json) {
                auto j = nlohmann::json::array();
                for (const auto& s : all) j.push_back(statement_json(graph.structure(), s));
                out << j.dump() << "\n";
            } else {
                for (const auto& s : all) out << format_statement(graph.structure(), s) << "\n";
            }
            return kTrue;
        }
        if (marg->parsed()) {
            const auto graph = read_graph_file(graph_path);
            MarginalSpec spec{graph.node_set(split_list(over)), graph.node_set(split_list(condition))};
            const auto induced = marginalize(graph, spec);
            std::string content;
            if (g.json) {
                nlohmann::json j{{"is_regression_graph", induced.is_regression_graph()},
                                 {"summary", to_json(induced.summary)},
                                 {"collapsed_pairs", induced.collapsed_pairs}};
                if (induced.graph) j["graph"] = to_json(*induced.graph);
                content = j.dump(2) + "\n";
            } else if (marg_dot->count() > 0) {
                content = induced.graph ? to_dot(*induced.graph) : to_dot(induced.summary);
            } else {
                content = induced.graph ? emit_graph_text(*induced.graph) : emit_mixed_text(induced.summary);
            }
            emit(out, output, content);
            if (!induced.graph) err << "note: the marginal graph leaves the regression-graph class\n";
            return kTrue;
        }
        if (equiv->parsed()) {
            const auto g1 = read_graph_file(graph_path);
            const auto g2 = read_graph_file(graph_path2);
            const bool result = markov_equivalent(g1, g2);
            if (g.json) out << nlohmann::json{{"equivalent", result}}.dump() << "\n";
            else out << (result ? "true" : "false") << "\n";
            return result ? kTrue : kFalse;
        }
        if (expand->parsed()) {
            const auto graph = read_graph_file(graph_path);
            std::vector<SelectedEdge> edges;
            for (const auto& e : expand_edges) {
                const auto ends = split_list(e);
                if (ends.size() != 2) {
                    err << "usage error: --edge expects A,B, got '" << e << "'\n";
                    return kUsage;
                }
                edges.push_back({ends[0], ends[1]});
            }
            const auto result = expand_hidden(graph, edges);
            std::string content;
            if (g.json) {
                nlohmann::json j{{"in_regression_class", result.in_regression_class()},
                                 {"latents", result.latents},
                                 {"graph", result.regression ? to_json(*result.regression) : to_json(result.graph)}};
                content = j.dump(2) + "\n";
            } else {
                content = result.regression ? emit_graph_text(*result.regression) : emit_mixed_text(result.graph);
            }
            emit(out, output, content);
            if (!result.in_regression_class()) err << "note: the expanded graph leaves the regression-graph class\n";
            return kTrue;
        }
        if (oracle->parsed()) {
            const auto graph = read_graph_file(graph_path);
            std::vector<std::uint64_t> seed_list;
            for (std::size_t s = 0; s < seeds; ++s) seed_list.push_back(g.seed + s);
            const auto rep = certify_with_oracle(graph, seed_list, g.tol, nonzero_tol);
            if (g.json) {
                auto fails = [&](const std::vector<OracleCheck>& v) {
                    auto j = nlohmann::json::array();
                    for (const auto& c : v) {
                        j.push_back({{"i", graph.name(c.i)}, {"k", graph.name(c.k)},
                                     {"c", format_nodes(graph.structure(), c.c)}, {"max_abs_rho", c.max_abs_rho}});
                    }
                    return j;
                };
                out << nlohmann::json{{"statements", rep.statements},
                                      {"implied", rep.implied},
                                      {"max_implied_rho", rep.max_implied_rho},
                                      {"min_nonimplied_rho", rep.min_nonimplied_rho},
                                      {"soundness_failures", fails(rep.soundness_failures)},
                                      {"completeness_failures", fails(rep.completeness_failures)},
                                      {"passed", rep.passed()}}
                           .dump(2)
                    << "\n";
            } else {
                std::vector<Matrix> covs;
                for (auto s : seed_list) covs.push_back(implied_covariance(random_faithful_model(graph, s)));
                out << std::left << std::setw(28) << "statement" << std::setw(9) << "implied";
                for (auto s : seed_list) out << std::setw(11) << ("seed " + std::to_string(s));
                out << "result\n";
                for (NodeIndex i = 0; i < graph.size(); ++i) {
                    for (NodeIndex k = i + 1; k < graph.size(); ++k) {
                        for_each_subset(graph.all() - NodeSet{i, k}, [&](NodeSet c) {
                            const IndependenceStatement st{NodeSet::single(i), NodeSet::single(k), c};
                            const bool imp = implies(graph, st);
                            double mx = 0.0;
                            out << std::setw(28) << format_statement(graph.structure(), st) << std::setw(9)
                                << (imp ? "yes" : "no");
                            for (const auto& cov : covs) {
                                const double rho = partial_correlation(cov, i, k, c);
                                mx = std::max(mx, std::abs(rho));
                                out << std::setw(11) << format_double(rho);
                            }
                            const bool ok = imp ? mx < g.tol : mx > nonzero_tol;
                            out << (ok ? "pass" : "FAIL") << "\n";
                        });
                    }
                }
                out << rep.statements << " statements, " << rep.implied << " implied, "
                    << rep.soundness_failures.size() << " soundness failures, " << rep.completeness_failures.size()
                    << " completeness failures: " << (rep.passed() ? "pass" : "fail") << "\n";
            }
            return rep.passed() ? kTrue : kFalse;
        }
        if (simulate->parsed()) {
            const auto d = simulate_mannheim(g.seed, n);
            emit(out, output, to_csv(d));
            return kTrue;
        }
        if (fit->parsed()) {
            auto data = read_csv(data_path);
            const auto cfg = read_fit_config(config_path);
            const auto result = fit_regression_graph(data, cfg);
            if (!output.empty()) write_fit_report(result, output);
            if (g.json) {
                out << report_json(result).dump(2) << "\n";
            } else {
                for (const auto& t : result.tables) {
                    out << t.response << ": " << wilkinson(t) << "  R2_full=" << std::fixed << std::setprecision(2)
                        << t.r2_full() << " R2_sel=" << t.r2_sel() << "\n";
                }
                out << std::defaultfloat << emit_graph_text(result.graph);
            }
            return kTrue;
        }
        if (report->parsed()) {
            const auto graph = read_graph_file(graph_path);
            if (format == "dot") {
                out << to_dot(graph);
            } else if (format == "json" || g.json) {
                out << to_json(graph).dump(2) << "\n";
            } else if (format == "text") {
                out << emit_graph_text(graph);
            } else {
                const auto& s = graph.structure();
                out << "nodes: " << graph.size() << ", edges: " << graph.edges().size() << "\n";
                out << "blocks:";
                for (std::size_t j = 0; j < graph.blocks().size(); ++j) {
                    out << " g" << j + 1 << "={" << format_nodes(s, graph.blocks()[j]) << "}"
                        << (j >= graph.response_block_count() ? " (context)" : "");
                }
                out << "\ncomponents:";
                for (auto c : connected_components_undirected(graph)) out << " {" << format_nodes(s, c) << "}";
                out << "\nfactorization:";
                for (const auto& f : factorization(graph)) out << ' ' << format_factor(graph, f, false);
                out << "\nVs:\n";
                for (const auto& v : enumerate_vs(graph)) {
                    out << "  " << graph.name(v.i) << ", " << graph.name(v.o) << ", " << graph.name(v.k) << ": "
                        << v_form_name(v.form) << (v.kind == VKind::Collision ? " (collision)" : " (transmitting)")
                        << "\n";
                }
                out << "defining independences:\n";
                for (const auto& st : defining_statements(graph)) out << "  " << format_statement(s, st) << "\n";
            }
            return kTrue;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kFailure;
    }
    err << app.help();
    return kUsage;
}

}  // namespace rgraph::cli
