#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "rgraph/graph.hpp"
#include "rgraph/statement.hpp"

namespace rgraph {

using Matrix = Eigen::MatrixXd;

/// Linear-Gaussian parameterization of a regression graph.
struct GaussianModel {
    RegressionGraph graph;
    /// coefficients(head, tail): coefficient of the tail node in the regression of the head node.
    Matrix coefficients;
    /// Per block: residual covariance given g_{>j} for response blocks, the marginal
    /// covariance for the context block. Indexed by block position; rows follow block members.
    std::vector<Matrix> block_covariance;
    /// Concentration matrix of the context block (empty without context).
    Matrix context_concentration;
};

struct OracleOptions {
    double magnitude_low = 0.3;
    double magnitude_high = 0.9;
    double initial_boost = 0.25;
    int max_doublings = 8;
};

/// Arrow coefficients uniform on ±[0.3, 0.9]; dashed residual covariances and full-line
/// concentrations on the same scale with unit diagonals, boosted on the diagonal until positive definite.
GaussianModel random_faithful_model(const RegressionGraph& g, std::uint64_t seed, const OracleOptions& opts = {});

/// Exact covariance over all nodes (graph index order), by recursion from the context forward.
Matrix implied_covariance(const GaussianModel& m);

/// Covariance of the linear system X = B X + e with Cov(e) = omega, i.e. (I - B)^-1 omega (I - B)^-T.
Matrix sem_covariance(const Matrix& b, const Matrix& omega);

/// ρ_{ik·c} from the inverse of the covariance submatrix on {i, k} ∪ c.
double partial_correlation(const Matrix& s, NodeIndex i, NodeIndex k, NodeSet c);

bool is_positive_definite(const Matrix& s);

struct OracleCheck {
    NodeIndex i = 0;
    NodeIndex k = 0;
    NodeSet c;
    bool implied = false;
    double max_abs_rho = 0.0;
};

struct OracleReport {
    std::size_t statements = 0;
    std::size_t implied = 0;
    /// Implied statements with |ρ| ≥ zero_tol for some seed.
    std::vector<OracleCheck> soundness_failures;
    /// Non-implied statements with |ρ| ≤ nonzero_tol for every seed.
    std::vector<OracleCheck> completeness_failures;
    double max_implied_rho = 0.0;
    double min_nonimplied_rho = 1.0;

    bool passed() const { return soundness_failures.empty() && completeness_failures.empty(); }
};

/// Compares the graph criterion on every pairwise statement (i, k | c) with exact partial
/// correlations under random faithful models for the given seeds.
OracleReport certify_with_oracle(const RegressionGraph& g, const std::vector<std::uint64_t>& seeds,
                                 double zero_tol = 1e-10, double nonzero_tol = 1e-6);

}  // namespace rgraph
