#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "rgraph/dataset.hpp"
#include "rgraph/graph.hpp"

namespace rgraph {

enum class TermKind { Linear, Quadratic, Interaction };

/// Regressor built from one or two base variables.
struct Term {
    TermKind kind = TermKind::Linear;
    std::string a;
    std::string b;  // second factor of an interaction

    static Term linear(std::string v) { return {TermKind::Linear, std::move(v), {}}; }
    static Term square(std::string v) { return {TermKind::Quadratic, std::move(v), {}}; }
    static Term interaction(std::string v, std::string w) { return {TermKind::Interaction, std::move(v), std::move(w)}; }

    /// "X4", "X4^2", "X4*E".
    std::string name() const;
    std::vector<std::string> bases() const;
    bool involves(std::string_view v) const;
    bool nonlinear() const { return kind != TermKind::Linear; }
    Eigen::VectorXd evaluate(const Dataset& d) const;

    bool operator==(const Term&) const = default;
};

/// Parses "X4", "X4^2" or "X4*E".
Term parse_term(std::string_view text);

struct FitConfig {
    /// Blocks of variable names g_1 < ... < g_J; the last block is the context block when `has_context`.
    std::vector<std::vector<std::string>> blocks;
    bool has_context = true;
    double threshold = 2.58;
    bool screening = false;
    /// Nonlinear terms added to the starting model of a response.
    std::map<std::string, std::vector<Term>> candidate_terms;
    /// Context variables that get a regression table; all of them when unset.
    std::optional<std::vector<std::string>> report_context;
    /// Name of a 0/1 norm-group column used for standardization; empty for none.
    std::string standardize;
};

/// TOML keys: blocks (array of string arrays), context (bool), threshold, screening,
/// candidate_terms (strings "RESPONSE: TERM"), report_context, standardize.
FitConfig parse_fit_config(std::string_view toml_text);
FitConfig read_fit_config(const std::string& path);

struct LeastSquares {
    Eigen::VectorXd coeffs;
    Eigen::VectorXd s_coeffs;
    Eigen::VectorXd residuals;
    double rss = 0.0;
    double sigma2 = 0.0;
    double r2 = 0.0;

    double z(Eigen::Index j) const { return coeffs(j) / s_coeffs(j); }
};

/// OLS of y on exactly the columns of X via column-pivoted Householder QR. s_coeffs use
/// RSS / (n - p); R² = 1 - RSS / TSS with TSS about the mean of y.
/// Throws TooFewRows when n <= p and RankDeficient when X lacks full column rank.
LeastSquares least_squares(const Eigen::VectorXd& y, const Eigen::MatrixXd& x);

/// Intercept column followed by the evaluated terms.
Eigen::MatrixXd design_matrix(const Dataset& d, const std::vector<Term>& terms);

/// OLS of `response` on an intercept plus `terms`.
LeastSquares fit_terms(const Dataset& d, const std::string& response, const std::vector<Term>& terms);

struct TermEstimate {
    Term term;
    double coeff = 0.0;
    double s_coeff = 0.0;
    double z = 0.0;
};

struct FittedModel {
    double intercept = 0.0;
    std::vector<TermEstimate> terms;
    double r2 = 0.0;
};

struct ExcludedTerm {
    Term term;
    /// Studentized value of the term when it alone is added to the selected model.
    double z_prime = 0.0;
};

struct SelectionStep {
    enum class Action { Delete, Reenter } action = Action::Delete;
    Term term;
    double z = 0.0;
};

struct RegressionTable {
    std::string response;
    std::size_t n = 0;
    double threshold = 2.58;
    FittedModel start;
    FittedModel selected;
    std::vector<ExcludedTerm> excluded;
    std::vector<SelectionStep> trace;
    double r2_full() const { return start.r2; }
    double r2_sel() const { return selected.r2; }
    std::vector<Term> selected_terms() const;
};

/// Backward elimination from `start_terms`: refit and delete the deletable term with the
/// smallest |z| (ties: latest column) while it is below the threshold. A main effect is not
/// deletable while a square or interaction containing it remains. Afterwards every excluded
/// term is tried alone; the largest |z'| at or above the threshold re-enters (with its main
/// effects) and elimination resumes. A term re-enters at most once.
RegressionTable backward_eliminate(const Dataset& d, const std::string& response, const std::vector<Term>& start_terms,
                                   double threshold = 2.58);

/// Squares and pairwise interactions of `past` whose |z| reaches the threshold when added
/// one at a time to the linear model on `past`.
std::vector<Term> screen_nonlinear(const Dataset& d, const std::string& response, const std::vector<std::string>& past,
                                   double threshold = 2.58);

struct DashedTest {
    std::string r1;
    std::string r2;
    double z = 0.0;
    bool present = false;
};

/// Regresses r1 on r2 plus the union of both selected regressor sets.
DashedTest dashed_edge_test(const Dataset& d, const std::string& r1, const std::string& r2,
                            const std::vector<Term>& selected_union, double threshold = 2.58);

struct FullTest {
    std::string a;
    std::string b;
    /// Largest-|z| term involving b in the regression of a, and vice versa.
    double z_ab = 0.0;
    double z_ba = 0.0;
    bool present = false;
};

/// Regresses each context variable on the remaining ones plus its configured nonlinear terms
/// (those not involving itself); a pair is joined when significant in either direction.
std::vector<FullTest> full_edge_test(const Dataset& d, const std::vector<std::string>& context,
                                     const std::map<std::string, std::vector<Term>>& nonlinear, double threshold = 2.58);

/// Starting terms of a context variable's regression: the other context variables plus its own
/// configured nonlinear terms.
std::vector<Term> context_terms(const std::vector<std::string>& context, const std::string& response,
                                const std::map<std::string, std::vector<Term>>& nonlinear);

/// "Y4+X4^2+E+H": a nonlinear term stands in for its main effects; "1" for an empty model.
std::string wilkinson(const std::vector<Term>& selected);
std::string wilkinson(const RegressionTable& table);

struct FitResult {
    std::vector<RegressionTable> tables;  // responses in block order, then reported context variables
    std::vector<DashedTest> dashed;
    std::vector<FullTest> full;
    RegressionGraph graph;
};

/// Arrows from the base variables of each response's selected terms, dashed and full lines as tested.
RegressionGraph build_fitted_graph(const FitConfig& cfg, const std::vector<RegressionTable>& tables,
                                   const std::vector<DashedTest>& dashed, const std::vector<FullTest>& full);

/// The whole procedure: per-response selection on all past variables plus candidate (and
/// optionally screened) nonlinear terms, dashed tests within response blocks, full-line tests in the context.
FitResult fit_regression_graph(const Dataset& d, const FitConfig& cfg);

}  // namespace rgraph
