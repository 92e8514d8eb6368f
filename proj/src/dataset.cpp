#include "rgraph/dataset.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "rgraph/error.hpp"
#include "rgraph/graph_io.hpp"

namespace rgraph {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    while (true) {
        const auto comma = line.find(',');
        out.push_back(trim(line.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        line.remove_prefix(comma + 1);
    }
    return out;
}

bool missing(std::string_view cell) {
    return cell.empty() || cell == "NA" || cell == "NaN" || cell == "nan" || cell == ".";
}

}  // namespace

bool Dataset::has(std::string_view name) const {
    return std::find(names.begin(), names.end(), name) != names.end();
}

std::size_t Dataset::index_of(std::string_view name) const {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw Error(Errc::UnknownNode, "no column '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - names.begin());
}

Eigen::VectorXd Dataset::column(std::string_view name) const {
    return values.col(static_cast<Eigen::Index>(index_of(name)));
}

Dataset parse_csv(std::string_view text) {
    std::vector<std::string_view> lines;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        const auto line = trim(text.substr(0, nl));
        if (!line.empty()) lines.push_back(line);
        if (nl == std::string_view::npos) break;
        text.remove_prefix(nl + 1);
    }
    if (lines.empty()) throw Error(Errc::ParseError, "empty CSV input");
    Dataset d;
    for (auto h : split(lines.front())) {
        if (h.empty()) throw Error(Errc::ParseError, "empty column name in header");
        if (d.has(h)) throw Error(Errc::ParseError, "duplicate column '" + std::string(h) + "'");
        d.names.emplace_back(h);
    }
    const auto p = d.names.size();
    std::vector<std::vector<double>> rows;
    std::vector<std::size_t> incomplete;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto cells = split(lines[r]);
        if (cells.size() != p) {
            throw Error(Errc::ParseError, "row " + std::to_string(r) + ": expected " + std::to_string(p) +
                                              " fields, got " + std::to_string(cells.size()));
        }
        std::vector<double> row(p);
        bool complete = true;
        for (std::size_t c = 0; c < p; ++c) {
            if (missing(cells[c])) {
                complete = false;
                continue;
            }
            const std::string cell(cells[c]);
            std::size_t used = 0;
            try {
                row[c] = std::stod(cell, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != cell.size()) {
                throw Error(Errc::ParseError, "row " + std::to_string(r) + ", column '" + d.names[c] +
                                                  "': not a number: '" + cell + "'");
            }
        }
        if (!complete) incomplete.push_back(r);
        rows.push_back(std::move(row));
    }
    if (!incomplete.empty()) {
        std::string list;
        for (std::size_t i = 0; i < incomplete.size() && i < 20; ++i) list += (i ? "," : "") + std::to_string(incomplete[i]);
        if (incomplete.size() > 20) list += ",...";
        throw Error(Errc::MissingValues, std::to_string(incomplete.size()) + " row(s) with missing values: " + list);
    }
    d.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(p));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < p; ++c) d.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
    return d;
}

Dataset read_csv(const std::string& path) { return parse_csv(read_text_file(path)); }

std::string to_csv(const Dataset& d) {
    std::ostringstream out;
    out << std::setprecision(17);
    for (std::size_t c = 0; c < d.cols(); ++c) out << (c ? "," : "") << d.names[c];
    out << '\n';
    for (Eigen::Index r = 0; r < d.values.rows(); ++r) {
        for (Eigen::Index c = 0; c < d.values.cols(); ++c) out << (c ? "," : "") << d.values(r, c);
        out << '\n';
    }
    return out.str();
}

void standardize(Dataset& d, const std::string& group_column) {
    const auto g = static_cast<Eigen::Index>(d.index_of(group_column));
    std::vector<Eigen::Index> members;
    for (Eigen::Index r = 0; r < d.values.rows(); ++r) {
        if (d.values(r, g) != 0.0) members.push_back(r);
    }
    if (members.size() < 2) throw Error(Errc::TooFewRows, "norm group needs at least two rows");
    Standardization s;
    s.group_column = group_column;
    for (Eigen::Index c = 0; c < d.values.cols(); ++c) {
        if (c == g) continue;
        double mean = 0.0;
        for (auto r : members) mean += d.values(r, c);
        mean /= static_cast<double>(members.size());
        double ss = 0.0;
        for (auto r : members) ss += (d.values(r, c) - mean) * (d.values(r, c) - mean);
        const double sd = std::sqrt(ss / static_cast<double>(members.size() - 1));
        if (!(sd > 0.0)) throw Error(Errc::InvalidArgument, "column '" + d.names[static_cast<std::size_t>(c)] + "' is constant in the norm group");
        d.values.col(c) = (d.values.col(c).array() - mean) / sd;
        s.columns.push_back(d.names[static_cast<std::size_t>(c)]);
        s.mean.push_back(mean);
        s.sd.push_back(sd);
    }
    d.standardization = std::move(s);
}

}  // namespace rgraph
