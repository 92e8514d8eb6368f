#include "rgraph/simulate.hpp"

#include <cmath>
#include <random>

#include "rgraph/error.hpp"

namespace rgraph {

namespace {

constexpr std::uint64_t kCalibrationSeed = 0x5eed0ca1;
constexpr std::size_t kCalibrationRows = 400000;

using Columns = std::map<std::string, Eigen::VectorXd>;

Eigen::VectorXd evaluate(const Term& t, const Columns& cols) {
    const Eigen::VectorXd& x = cols.at(t.a);
    switch (t.kind) {
        case TermKind::Linear: return x;
        case TermKind::Quadratic: return x.array().square().matrix();
        case TermKind::Interaction: return (x.array() * cols.at(t.b).array()).matrix();
    }
    return x;
}

Eigen::VectorXd systematic(const GeneratingEquation& eq, const Columns& cols, Eigen::Index n) {
    Eigen::VectorXd y = Eigen::VectorXd::Constant(n, eq.constant);
    for (const auto& [term, coeff] : eq.terms) y += coeff * evaluate(term, cols);
    return y;
}

double variance(const Eigen::VectorXd& x) {
    const double m = x.mean();
    return (x.array() - m).square().sum() / static_cast<double>(x.size() - 1);
}

Eigen::VectorXd normals(std::mt19937_64& rng, Eigen::Index n) {
    std::normal_distribution<double> z;
    Eigen::VectorXd out(n);
    for (Eigen::Index i = 0; i < n; ++i) out(i) = z(rng);
    return out;
}

std::string pair_key(const std::string& a, const std::string& b) { return a + "~" + b; }

/// Partner of `response` in a dashed target generated before it, if any.
const DashedTarget* earlier_partner(const MannheimDesign& design, const std::string& response) {
    for (const auto& t : design.dashed) {
        if (t.r2 == response) return &t;
    }
    return nullptr;
}

double eh_correlation(const MannheimDesign& design) {
    const auto& xr = *std::find_if(design.equations.begin(), design.equations.end(),
                                   [](const GeneratingEquation& e) { return e.response == "Xr"; });
    double a = 0.0, b = 0.0;
    for (const auto& [term, coeff] : xr.terms) {
        if (term == Term::linear("E")) a = coeff;
        if (term == Term::linear("H")) b = coeff;
    }
    // cov(E, H | Xr) = 0  <=>  r var(Xr) = (a + b r)(a r + b), var(Xr) = (a² + b² + 2abr) / R².
    auto f = [&](double r) { return r * (a * a + b * b + 2 * a * b * r) / xr.r2 - (a + b * r) * (a * r + b); };
    double lo = 0.0, hi = 1.0;
    if (f(lo) > 0.0 || f(hi) < 0.0) throw std::logic_error("no E-H correlation solves the design");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Runs the generator; when `calibrating`, residual sds are solved from R² and stored in `cal`.
Columns generate(const MannheimDesign& design, MannheimCalibration& cal, std::mt19937_64& rng, Eigen::Index n,
                 bool calibrating) {
    Columns cols;
    const double r = cal.eh_correlation;
    const Eigen::VectorXd z1 = normals(rng, n), z2 = normals(rng, n);
    cols["E"] = z1;
    cols["H"] = r * z1 + std::sqrt(1.0 - r * r) * z2;
    std::map<std::string, Eigen::VectorXd> noise;
    for (const auto& eq : design.equations) {
        const Eigen::VectorXd mean = systematic(eq, cols, n);
        if (calibrating) {
            cal.residual_sd[eq.response] = std::sqrt(variance(mean) * (1.0 - eq.r2) / eq.r2);
        }
        Eigen::VectorXd z = normals(rng, n);
        if (const auto* partner = earlier_partner(design, eq.response)) {
            const double rho = cal.residual_correlation.at(pair_key(partner->r1, partner->r2));
            z = rho * noise.at(partner->r1) + std::sqrt(1.0 - rho * rho) * z;
        }
        noise[eq.response] = z;
        cols[eq.response] = mean + cal.residual_sd.at(eq.response) * z;
    }
    return cols;
}

}  // namespace

const MannheimDesign& mannheim_design() {
    static const MannheimDesign design = [] {
        MannheimDesign d;
        auto lin = Term::linear;
        auto sq = Term::square;
        d.equations = {
            {"Yr", -0.21, {{lin("E"), 0.55}, {sq("E"), 0.16}}, 0.56},
            {"Xr", 0.22, {{lin("E"), 0.12}, {lin("H"), 0.48}}, 0.35},
            {"Y4", -0.29, {{lin("Yr"), 0.36}, {lin("Xr"), 0.18}, {sq("Xr"), 0.14}}, 0.25},
            {"X4", -0.47, {{lin("Yr"), 0.28}, {lin("Xr"), 0.50}, {sq("Xr"), 0.23}}, 0.36},
            {"Y8", 0.03, {{lin("Y4"), 0.78}, {lin("X4"), 0.07}, {sq("X4"), 0.10}, {lin("E"), 0.12}, {lin("H"), 0.12}}, 0.67},
            {"X8", 0.26, {{lin("X4"), 0.33}, {lin("Xr"), 0.19}, {sq("X4"), 0.05}}, 0.36},
        };
        d.dashed = {{"Y4", "X4", 7.0}, {"Y8", "X8", 2.4}};
        return d;
    }();
    return design;
}

const MannheimCalibration& mannheim_calibration() {
    static const MannheimCalibration cal = [] {
        const auto& design = mannheim_design();
        MannheimCalibration c;
        c.eh_correlation = eh_correlation(design);
        for (const auto& t : design.dashed) {
            std::vector<Term> regressors;
            for (const auto& eq : design.equations) {
                if (eq.response != t.r1 && eq.response != t.r2) continue;
                for (const auto& [term, coeff] : eq.terms) {
                    if (std::find(regressors.begin(), regressors.end(), term) == regressors.end()) regressors.push_back(term);
                }
            }
            // Intercept, the other response and the combined regressors.
            const double df = static_cast<double>(design.reference_n) - static_cast<double>(regressors.size() + 2);
            c.residual_correlation[pair_key(t.r1, t.r2)] = t.z / std::sqrt(df + t.z * t.z);
        }
        std::mt19937_64 rng(kCalibrationSeed);
        generate(design, c, rng, static_cast<Eigen::Index>(kCalibrationRows), true);
        return c;
    }();
    return cal;
}

Dataset simulate_mannheim(std::uint64_t seed, std::size_t n) {
    if (n < 50) throw Error(Errc::InvalidArgument, "simulate_mannheim needs n >= 50");
    MannheimCalibration cal = mannheim_calibration();
    std::mt19937_64 rng(seed);
    const auto cols = generate(mannheim_design(), cal, rng, static_cast<Eigen::Index>(n), false);
    Dataset d;
    d.names = {"Y8", "X8", "Y4", "X4", "Yr", "Xr", "E", "H"};
    d.values.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d.names.size()));
    for (std::size_t c = 0; c < d.names.size(); ++c) d.values.col(static_cast<Eigen::Index>(c)) = cols.at(d.names[c]);
    return d;
}

FitConfig mannheim_config() {
    FitConfig cfg;
    cfg.blocks = {{"Y8", "X8"}, {"Y4", "X4"}, {"Yr", "Xr", "E", "H"}};
    cfg.has_context = true;
    cfg.candidate_terms = {
        {"Y8", {Term::square("X4")}}, {"X8", {Term::square("X4")}}, {"Y4", {Term::square("Xr")}},
        {"X4", {Term::square("Xr")}}, {"Yr", {Term::square("E")}},  {"Xr", {Term::square("E")}},
    };
    cfg.report_context = std::vector<std::string>{"Yr", "Xr"};
    return cfg;
}

}  // namespace rgraph
