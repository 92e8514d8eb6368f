#include "rgraph/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "rgraph/error.hpp"

namespace rgraph {

std::string Term::name() const {
    switch (kind) {
        case TermKind::Linear: return a;
        case TermKind::Quadratic: return a + "^2";
        case TermKind::Interaction: return a + "*" + b;
    }
    return a;
}

std::vector<std::string> Term::bases() const {
    if (kind == TermKind::Interaction) return {a, b};
    return {a};
}

bool Term::involves(std::string_view v) const { return a == v || (kind == TermKind::Interaction && b == v); }

Eigen::VectorXd Term::evaluate(const Dataset& d) const {
    const Eigen::VectorXd x = d.column(a);
    switch (kind) {
        case TermKind::Linear: return x;
        case TermKind::Quadratic: return x.array().square().matrix();
        case TermKind::Interaction: return (x.array() * d.column(b).array()).matrix();
    }
    return x;
}

Term parse_term(std::string_view text) {
    auto valid = [](std::string_view s) {
        return !s.empty() && std::none_of(s.begin(), s.end(), [](char c) { return c == ' ' || c == '^' || c == '*' || c == ':'; });
    };
    if (text.size() > 2 && text.substr(text.size() - 2) == "^2") {
        const auto base = text.substr(0, text.size() - 2);
        if (valid(base)) return Term::square(std::string(base));
    } else if (const auto star = text.find('*'); star != std::string_view::npos) {
        const auto l = text.substr(0, star), r = text.substr(star + 1);
        if (valid(l) && valid(r) && l != r) return Term::interaction(std::string(l), std::string(r));
        if (valid(l) && l == r) return Term::square(std::string(l));
    } else if (valid(text)) {
        return Term::linear(std::string(text));
    }
    throw Error(Errc::ParseError, "cannot parse term '" + std::string(text) + "'");
}

LeastSquares least_squares(const Eigen::VectorXd& y, const Eigen::MatrixXd& x) {
    const auto n = x.rows(), p = x.cols();
    if (y.size() != n) throw Error(Errc::InvalidArgument, "response and design have different row counts");
    if (n <= p) {
        throw Error(Errc::TooFewRows, std::to_string(n) + " rows for " + std::to_string(p) + " columns");
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr;
    qr.setThreshold(1e-10);
    qr.compute(x);
    if (qr.rank() < p) throw Error(Errc::RankDeficient, "design matrix has rank " + std::to_string(qr.rank()) + " < " + std::to_string(p));

    LeastSquares out;
    out.coeffs = qr.solve(y);
    out.residuals = y - x * out.coeffs;
    out.rss = out.residuals.squaredNorm();
    out.sigma2 = out.rss / static_cast<double>(n - p);
    const Eigen::MatrixXd r = qr.matrixR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
    const Eigen::MatrixXd r_inv = r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
    const Eigen::MatrixXd unscaled = qr.colsPermutation() * (r_inv * r_inv.transpose()) * qr.colsPermutation().transpose();
    out.s_coeffs = (out.sigma2 * unscaled.diagonal()).array().sqrt().matrix();
    const double tss = (y.array() - y.mean()).square().sum();
    out.r2 = tss > 0.0 ? 1.0 - out.rss / tss : 0.0;
    return out;
}

Eigen::MatrixXd design_matrix(const Dataset& d, const std::vector<Term>& terms) {
    Eigen::MatrixXd x(d.values.rows(), static_cast<Eigen::Index>(terms.size()) + 1);
    x.col(0).setOnes();
    for (std::size_t t = 0; t < terms.size(); ++t) x.col(static_cast<Eigen::Index>(t) + 1) = terms[t].evaluate(d);
    return x;
}

LeastSquares fit_terms(const Dataset& d, const std::string& response, const std::vector<Term>& terms) {
    return least_squares(d.column(response), design_matrix(d, terms));
}

namespace {

FittedModel summarize(const LeastSquares& ls, const std::vector<Term>& terms) {
    FittedModel m;
    m.intercept = ls.coeffs(0);
    m.r2 = ls.r2;
    for (std::size_t t = 0; t < terms.size(); ++t) {
        const auto j = static_cast<Eigen::Index>(t) + 1;
        m.terms.push_back({terms[t], ls.coeffs(j), ls.s_coeffs(j), ls.z(j)});
    }
    return m;
}

bool contains(const std::vector<Term>& terms, const Term& t) { return std::find(terms.begin(), terms.end(), t) != terms.end(); }

/// A main effect stays while a nonlinear term built on it remains.
bool protected_term(const std::vector<Term>& current, const Term& t) {
    if (t.nonlinear()) return false;
    return std::any_of(current.begin(), current.end(), [&](const Term& u) { return u.nonlinear() && u.involves(t.a); });
}

/// Keeps `terms` in the order of `reference`.
std::vector<Term> in_order(const std::vector<Term>& reference, const std::vector<Term>& terms) {
    std::vector<Term> out;
    for (const auto& t : reference) {
        if (contains(terms, t)) out.push_back(t);
    }
    return out;
}

double z_when_added(const Dataset& d, const std::string& response, std::vector<Term> current, const Term& t) {
    current.push_back(t);
    const auto ls = fit_terms(d, response, current);
    return ls.z(static_cast<Eigen::Index>(current.size()));
}

}  // namespace

std::vector<Term> RegressionTable::selected_terms() const {
    std::vector<Term> out;
    for (const auto& e : selected.terms) out.push_back(e.term);
    return out;
}

RegressionTable backward_eliminate(const Dataset& d, const std::string& response, const std::vector<Term>& start_terms,
                                   double threshold) {
    std::vector<Term> start;
    for (const auto& t : start_terms) {
        if (t.involves(response)) throw Error(Errc::InvalidArgument, "term '" + t.name() + "' involves the response");
        if (!contains(start, t)) start.push_back(t);
    }
    // Main effects of starting nonlinear terms join the starting model.
    std::vector<Term> with_mains = start;
    for (const auto& t : start) {
        for (const auto& b : t.bases()) {
            if (t.nonlinear() && !contains(with_mains, Term::linear(b))) with_mains.push_back(Term::linear(b));
        }
    }
    start = with_mains;

    RegressionTable table;
    table.response = response;
    table.n = d.rows();
    table.threshold = threshold;
    table.start = summarize(fit_terms(d, response, start), start);

    std::vector<Term> current = start;
    std::set<std::string> reentered;
    while (true) {
        while (!current.empty()) {
            const auto ls = fit_terms(d, response, current);
            std::optional<std::size_t> victim;
            double smallest = 0.0;
            for (std::size_t t = 0; t < current.size(); ++t) {
                if (protected_term(current, current[t])) continue;
                const double z = std::abs(ls.z(static_cast<Eigen::Index>(t) + 1));
                if (!victim || z <= smallest) {
                    victim = t;
                    smallest = z;
                }
            }
            if (!victim || smallest >= threshold) break;
            table.trace.push_back({SelectionStep::Action::Delete, current[*victim], ls.z(static_cast<Eigen::Index>(*victim) + 1)});
            current.erase(current.begin() + static_cast<long>(*victim));
        }
        std::optional<Term> best;
        double best_z = 0.0;
        for (const auto& t : start) {
            if (contains(current, t)) continue;
            const double z = z_when_added(d, response, current, t);
            if (std::abs(z) >= threshold && !reentered.count(t.name()) && (!best || std::abs(z) > std::abs(best_z))) {
                best = t;
                best_z = z;
            }
        }
        if (!best) break;
        reentered.insert(best->name());
        table.trace.push_back({SelectionStep::Action::Reenter, *best, best_z});
        std::vector<Term> grown = current;
        grown.push_back(*best);
        for (const auto& b : best->bases()) {
            if (best->nonlinear() && !contains(grown, Term::linear(b))) grown.push_back(Term::linear(b));
        }
        current = in_order(start, grown);
    }

    table.selected = summarize(fit_terms(d, response, current), current);
    for (const auto& t : start) {
        if (!contains(current, t)) table.excluded.push_back({t, z_when_added(d, response, current, t)});
    }
    return table;
}

std::vector<Term> screen_nonlinear(const Dataset& d, const std::string& response, const std::vector<std::string>& past,
                                   double threshold) {
    std::vector<Term> linear;
    for (const auto& v : past) linear.push_back(Term::linear(v));
    std::vector<Term> candidates;
    for (std::size_t i = 0; i < past.size(); ++i) {
        candidates.push_back(Term::square(past[i]));
        for (std::size_t k = i + 1; k < past.size(); ++k) candidates.push_back(Term::interaction(past[i], past[k]));
    }
    std::vector<Term> out;
    for (const auto& t : candidates) {
        if (std::abs(z_when_added(d, response, linear, t)) >= threshold) out.push_back(t);
    }
    return out;
}

DashedTest dashed_edge_test(const Dataset& d, const std::string& r1, const std::string& r2,
                            const std::vector<Term>& selected_union, double threshold) {
    std::vector<Term> terms{Term::linear(r2)};
    for (const auto& t : selected_union) {
        if (t.involves(r1)) throw Error(Errc::InvalidArgument, "regressor '" + t.name() + "' involves '" + r1 + "'");
        if (!contains(terms, t)) terms.push_back(t);
    }
    const auto ls = fit_terms(d, r1, terms);
    DashedTest out{r1, r2, ls.z(1), false};
    out.present = std::abs(out.z) >= threshold;
    return out;
}

std::vector<Term> context_terms(const std::vector<std::string>& context, const std::string& response,
                                const std::map<std::string, std::vector<Term>>& nonlinear) {
    std::vector<Term> terms;
    for (const auto& v : context) {
        if (v != response) terms.push_back(Term::linear(v));
    }
    if (const auto it = nonlinear.find(response); it != nonlinear.end()) {
        for (const auto& t : it->second) {
            if (!t.involves(response) && !contains(terms, t)) terms.push_back(t);
        }
    }
    return terms;
}

std::vector<FullTest> full_edge_test(const Dataset& d, const std::vector<std::string>& context,
                                     const std::map<std::string, std::vector<Term>>& nonlinear, double threshold) {
    // z[a][b]: strongest term involving b in the regression of a.
    std::map<std::string, std::map<std::string, double>> z;
    for (const auto& a : context) {
        const auto terms = context_terms(context, a, nonlinear);
        const auto ls = fit_terms(d, a, terms);
        for (const auto& b : context) {
            if (b == a) continue;
            double best = 0.0;
            for (std::size_t t = 0; t < terms.size(); ++t) {
                const double zt = ls.z(static_cast<Eigen::Index>(t) + 1);
                if (terms[t].involves(b) && std::abs(zt) > std::abs(best)) best = zt;
            }
            z[a][b] = best;
        }
    }
    std::vector<FullTest> out;
    for (std::size_t i = 0; i < context.size(); ++i) {
        for (std::size_t k = i + 1; k < context.size(); ++k) {
            const auto& a = context[i];
            const auto& b = context[k];
            FullTest t{a, b, z[a][b], z[b][a], false};
            t.present = std::abs(t.z_ab) >= threshold || std::abs(t.z_ba) >= threshold;
            out.push_back(t);
        }
    }
    return out;
}

std::string wilkinson(const std::vector<Term>& selected) {
    std::vector<std::string> parts;
    std::set<std::string> printed;
    auto emit = [&](const Term& t) {
        if (printed.insert(t.name()).second) parts.push_back(t.name());
    };
    for (const auto& t : selected) {
        if (t.nonlinear()) {
            const bool has_main = std::any_of(selected.begin(), selected.end(), [&](const Term& u) {
                return !u.nonlinear() && t.involves(u.a);
            });
            if (!has_main) emit(t);
            continue;
        }
        bool replaced = false;
        for (const auto& u : selected) {
            if (u.nonlinear() && u.involves(t.a)) {
                emit(u);
                replaced = true;
            }
        }
        if (!replaced) emit(t);
    }
    if (parts.empty()) return "1";
    std::string out;
    for (const auto& p : parts) out += (out.empty() ? "" : "+") + p;
    return out;
}

std::string wilkinson(const RegressionTable& table) { return wilkinson(table.selected_terms()); }

namespace {

std::size_t response_block_count(const FitConfig& cfg) {
    return cfg.has_context ? cfg.blocks.size() - 1 : cfg.blocks.size();
}

std::vector<std::string> context_of(const FitConfig& cfg) {
    return cfg.has_context ? cfg.blocks.back() : std::vector<std::string>{};
}

}  // namespace

RegressionGraph build_fitted_graph(const FitConfig& cfg, const std::vector<RegressionTable>& tables,
                                   const std::vector<DashedTest>& dashed, const std::vector<FullTest>& full) {
    std::vector<NodeId> nodes;
    for (const auto& b : cfg.blocks) {
        for (const auto& v : b) nodes.push_back({v, v});
    }
    BlockOrdering ordering{cfg.blocks, response_block_count(cfg)};
    const auto context = context_of(cfg);
    std::vector<EdgeSpec> edges;
    std::set<std::pair<std::string, std::string>> arrows;
    for (const auto& t : tables) {
        if (std::find(context.begin(), context.end(), t.response) != context.end()) continue;
        for (const auto& e : t.selected.terms) {
            for (const auto& b : e.term.bases()) {
                if (arrows.insert({b, t.response}).second) edges.push_back({b, t.response, EdgeKind::Arrow});
            }
        }
    }
    for (const auto& t : dashed) {
        if (t.present) edges.push_back({t.r1, t.r2, EdgeKind::Dashed});
    }
    for (const auto& t : full) {
        if (t.present) edges.push_back({t.a, t.b, EdgeKind::Full});
    }
    return build_graph(nodes, ordering, edges);
}

FitResult fit_regression_graph(const Dataset& data, const FitConfig& cfg) {
    if (cfg.blocks.empty()) throw Error(Errc::ConfigError, "no blocks configured");
    std::set<std::string> seen;
    for (const auto& b : cfg.blocks) {
        for (const auto& v : b) {
            if (!data.has(v)) throw Error(Errc::ConfigError, "variable '" + v + "' is not a data column");
            if (!seen.insert(v).second) throw Error(Errc::ConfigError, "variable '" + v + "' appears in two blocks");
        }
    }
    for (const auto& [response, terms] : cfg.candidate_terms) {
        if (!seen.count(response)) throw Error(Errc::ConfigError, "candidate terms for unknown response '" + response + "'");
        for (const auto& t : terms) {
            for (const auto& b : t.bases()) {
                if (!seen.count(b)) throw Error(Errc::ConfigError, "term '" + t.name() + "' uses unknown variable '" + b + "'");
            }
        }
    }
    Dataset d = data;
    if (!cfg.standardize.empty()) standardize(d, cfg.standardize);

    FitResult result;
    const auto split = response_block_count(cfg);
    const auto context = context_of(cfg);
    std::map<std::string, std::vector<Term>> selected;
    for (std::size_t j = 0; j < split; ++j) {
        std::vector<std::string> past;
        for (std::size_t l = j + 1; l < cfg.blocks.size(); ++l) past.insert(past.end(), cfg.blocks[l].begin(), cfg.blocks[l].end());
        for (const auto& r : cfg.blocks[j]) {
            std::vector<Term> start;
            for (const auto& v : past) start.push_back(Term::linear(v));
            if (const auto it = cfg.candidate_terms.find(r); it != cfg.candidate_terms.end()) {
                for (const auto& t : it->second) {
                    for (const auto& b : t.bases()) {
                        if (std::find(past.begin(), past.end(), b) == past.end()) {
                            throw Error(Errc::ConfigError, "term '" + t.name() + "' for '" + r + "' is not in its past");
                        }
                    }
                    start.push_back(t);
                }
            }
            if (cfg.screening) {
                for (const auto& t : screen_nonlinear(d, r, past, cfg.threshold)) {
                    if (!contains(start, t)) start.push_back(t);
                }
            }
            result.tables.push_back(backward_eliminate(d, r, start, cfg.threshold));
            selected[r] = result.tables.back().selected_terms();
        }
        const auto& block = cfg.blocks[j];
        for (std::size_t a = 0; a < block.size(); ++a) {
            for (std::size_t b = a + 1; b < block.size(); ++b) {
                std::vector<Term> uni = selected[block[a]];
                for (const auto& t : selected[block[b]]) {
                    if (!contains(uni, t)) uni.push_back(t);
                }
                result.dashed.push_back(dashed_edge_test(d, block[a], block[b], uni, cfg.threshold));
            }
        }
    }
    if (!context.empty()) {
        result.full = full_edge_test(d, context, cfg.candidate_terms, cfg.threshold);
        const auto reported = cfg.report_context.value_or(context);
        for (const auto& c : reported) {
            if (std::find(context.begin(), context.end(), c) == context.end()) {
                throw Error(Errc::ConfigError, "report_context entry '" + c + "' is not a context variable");
            }
            if (context.size() < 2) continue;
            result.tables.push_back(backward_eliminate(d, c, context_terms(context, c, cfg.candidate_terms), cfg.threshold));
        }
    }
    result.graph = build_fitted_graph(cfg, result.tables, result.dashed, result.full);
    return result;
}

}  // namespace rgraph
