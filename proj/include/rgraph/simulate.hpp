#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rgraph/dataset.hpp"
#include "rgraph/fitting.hpp"

namespace rgraph {

/// One generating regression of the child-development example.
struct GeneratingEquation {
    std::string response;
    double constant = 0.0;
    std::vector<std::pair<Term, double>> terms;
    /// Population R² the residual variance is calibrated to.
    double r2 = 0.0;
};

struct DashedTarget {
    std::string r1;
    std::string r2;
    /// Studentized value of the residual dependence reported for a sample of `reference_n`.
    double z = 0.0;
};

struct MannheimDesign {
    std::vector<GeneratingEquation> equations;  // generation order: context first, then earlier blocks
    std::vector<DashedTarget> dashed;
    std::size_t reference_n = 347;
};

const MannheimDesign& mannheim_design();

/// Derived constants, computed once from the design.
struct MannheimCalibration {
    /// corr(E, H), chosen so that E and H are uncorrelated given Xr (no E-H full line).
    double eh_correlation = 0.0;
    std::map<std::string, double> residual_sd;
    /// Residual correlation per dashed pair: z / sqrt(df + z²), df = reference_n - parameters.
    std::map<std::string, double> residual_correlation;  // keyed "r1~r2"
};

const MannheimCalibration& mannheim_calibration();

/// Columns Y8, X8, Y4, X4, Yr, Xr, E, H; deterministic given seed. Requires n >= 50.
Dataset simulate_mannheim(std::uint64_t seed, std::size_t n);

/// Blocks Y8 X8 | Y4 X4 || Yr Xr E H with the squared terms of the starting models.
FitConfig mannheim_config();

}  // namespace rgraph
