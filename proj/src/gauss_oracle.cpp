#include "rgraph/gauss_oracle.hpp"

#include <cmath>
#include <random>

#include "rgraph/independence.hpp"

namespace rgraph {

namespace {

double signed_magnitude(std::mt19937_64& rng, const OracleOptions& opts) {
    std::uniform_real_distribution<double> mag(opts.magnitude_low, opts.magnitude_high);
    std::bernoulli_distribution sign(0.5);
    const double v = mag(rng);
    return sign(rng) ? v : -v;
}

/// Unit-diagonal symmetric matrix with random entries on `pattern` edges, boosted until PD.
Matrix patterned_pd(const std::vector<NodeIndex>& members, const MixedGraph& g, bool dashed, std::mt19937_64& rng,
                    const OracleOptions& opts) {
    const auto m = static_cast<Eigen::Index>(members.size());
    Matrix s = Matrix::Identity(m, m);
    for (Eigen::Index a = 0; a < m; ++a) {
        for (Eigen::Index b = a + 1; b < m; ++b) {
            const auto x = members[static_cast<std::size_t>(a)], y = members[static_cast<std::size_t>(b)];
            const bool edge = dashed ? g.has_dashed(x, y) : g.has_full(x, y);
            if (edge) s(a, b) = s(b, a) = signed_magnitude(rng, opts);
        }
    }
    if (is_positive_definite(s)) return s;
    double delta = opts.initial_boost;
    for (int attempt = 0; attempt <= opts.max_doublings; ++attempt, delta *= 2.0) {
        Matrix boosted = s + delta * Matrix::Identity(m, m);
        if (is_positive_definite(boosted)) return boosted;
    }
    throw Error(Errc::PDRepairFailed, "diagonal boosting did not reach a positive definite matrix");
}

std::vector<Eigen::Index> as_indices(NodeSet s) {
    std::vector<Eigen::Index> out;
    for (auto x : s) out.push_back(static_cast<Eigen::Index>(x));
    return out;
}

}  // namespace

bool is_positive_definite(const Matrix& s) {
    if (s.rows() == 0) return true;
    Eigen::LLT<Matrix> llt(s);
    if (llt.info() != Eigen::Success) return false;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(s, Eigen::EigenvaluesOnly);
    return eig.eigenvalues().minCoeff() > 0.0;
}

GaussianModel random_faithful_model(const RegressionGraph& g, std::uint64_t seed, const OracleOptions& opts) {
    std::mt19937_64 rng(seed);
    const auto n = static_cast<Eigen::Index>(g.size());
    GaussianModel m{g, Matrix::Zero(n, n), {}, Matrix()};
    for (const auto& e : g.edges()) {
        if (e.kind == EdgeKind::Arrow) {
            m.coefficients(static_cast<Eigen::Index>(e.to), static_cast<Eigen::Index>(e.from)) = signed_magnitude(rng, opts);
        }
    }
    for (std::size_t j = 0; j < g.blocks().size(); ++j) {
        const auto members = g.blocks()[j].to_vector();
        const bool context = j >= g.response_block_count();
        Matrix pattern = patterned_pd(members, g.structure(), !context, rng, opts);
        if (context) {
            m.context_concentration = pattern;
            m.block_covariance.push_back(pattern.inverse());
        } else {
            m.block_covariance.push_back(pattern);
        }
    }
    return m;
}

Matrix implied_covariance(const GaussianModel& m) {
    const auto& g = m.graph;
    const auto n = static_cast<Eigen::Index>(g.size());
    Matrix s = Matrix::Zero(n, n);
    for (std::size_t j = g.blocks().size(); j-- > 0;) {
        const auto block = as_indices(g.blocks()[j]);
        const auto past = as_indices(g.after(j));
        const Matrix b = m.coefficients(block, past);
        const Matrix cross = b * s(past, past);
        s(block, past) = cross;
        s(past, block) = cross.transpose();
        s(block, block) = cross * b.transpose() + m.block_covariance[j];
    }
    return s;
}

Matrix sem_covariance(const Matrix& b, const Matrix& omega) {
    const auto n = b.rows();
    const Matrix a = (Matrix::Identity(n, n) - b).inverse();
    return a * omega * a.transpose();
}

double partial_correlation(const Matrix& s, NodeIndex i, NodeIndex k, NodeSet c) {
    std::vector<Eigen::Index> idx{static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)};
    for (auto x : c) idx.push_back(static_cast<Eigen::Index>(x));
    for (auto x : idx) {
        if (x < 0 || x >= s.rows()) throw Error(Errc::InvalidArgument, "index outside the covariance matrix");
    }
    const Matrix sub = s(idx, idx);
    Eigen::FullPivLU<Matrix> lu(sub);
    if (!lu.isInvertible()) throw Error(Errc::SingularSubmatrix, "covariance submatrix is singular");
    const Matrix p = lu.inverse();
    return -p(0, 1) / std::sqrt(p(0, 0) * p(1, 1));
}

OracleReport certify_with_oracle(const RegressionGraph& g, const std::vector<std::uint64_t>& seeds, double zero_tol,
                                 double nonzero_tol) {
    std::vector<Matrix> covs;
    for (auto seed : seeds) covs.push_back(implied_covariance(random_faithful_model(g, seed)));
    OracleReport report;
    for (NodeIndex i = 0; i < g.size(); ++i) {
        for (NodeIndex k = i + 1; k < g.size(); ++k) {
            const NodeSet rest = g.all() - NodeSet{i, k};
            for_each_subset(rest, [&](NodeSet c) {
                OracleCheck check{i, k, c, implies(g, {NodeSet::single(i), NodeSet::single(k), c}), 0.0};
                for (const auto& s : covs) check.max_abs_rho = std::max(check.max_abs_rho, std::abs(partial_correlation(s, i, k, c)));
                ++report.statements;
                if (check.implied) {
                    ++report.implied;
                    report.max_implied_rho = std::max(report.max_implied_rho, check.max_abs_rho);
                    if (!(check.max_abs_rho < zero_tol)) report.soundness_failures.push_back(check);
                } else {
                    report.min_nonimplied_rho = std::min(report.min_nonimplied_rho, check.max_abs_rho);
                    if (!(check.max_abs_rho > nonzero_tol)) report.completeness_failures.push_back(check);
                }
            });
        }
    }
    return report;
}

}  // namespace rgraph
