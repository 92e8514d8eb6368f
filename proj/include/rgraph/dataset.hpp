#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace rgraph {

/// Column standardization applied at ingestion.
struct Standardization {
    std::string group_column;  // 0/1 indicator of the norm group; empty when not standardized
    std::vector<std::string> columns;
    std::vector<double> mean;
    std::vector<double> sd;
};

/// n × p numeric table with named columns.
struct Dataset {
    std::vector<std::string> names;
    Eigen::MatrixXd values;
    Standardization standardization;

    std::size_t rows() const { return static_cast<std::size_t>(values.rows()); }
    std::size_t cols() const { return names.size(); }
    bool has(std::string_view name) const;
    std::size_t index_of(std::string_view name) const;
    Eigen::VectorXd column(std::string_view name) const;
};

/// Header row of names, then numeric rows. Empty cells and NA/NaN are missing values and raise
/// MissingValues listing the affected rows (1-based data rows).
Dataset parse_csv(std::string_view text);
Dataset read_csv(const std::string& path);
std::string to_csv(const Dataset& d);

/// Standardizes every column except `group_column` with the mean and sd of the rows where
/// `group_column` is nonzero.
void standardize(Dataset& d, const std::string& group_column);

}  // namespace rgraph
