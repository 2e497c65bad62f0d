#include "mss/panel.hpp"

#include "mss/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace mss {

namespace {

std::string trim(const std::string& s) {
    auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return {};
    auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        fields.push_back(trim(field));
    }
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size() && std::isfinite(out);
}

void format_value(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
}

}  // namespace

ReturnPanel::ReturnPanel(Eigen::MatrixXd values, std::vector<std::string> asset_labels,
                         std::vector<std::string> period_labels)
    : values_(std::move(values)),
      asset_labels_(std::move(asset_labels)),
      period_labels_(std::move(period_labels)) {
    const auto T = values_.rows();
    const auto d = values_.cols();
    if (d < 2) throw DataError("panel needs at least 2 assets, got " + std::to_string(d));
    if (static_cast<std::size_t>(d) != asset_labels_.size())
        throw DataError("asset label count does not match column count");
    if (static_cast<std::size_t>(T) != period_labels_.size())
        throw DataError("period label count does not match row count");
    if (T <= d + 1)
        throw DataError("panel has T=" + std::to_string(T) + " periods for d=" +
                        std::to_string(d) + " assets; need T > d+1");
    if (!values_.allFinite()) throw DataError("panel contains missing or non-finite returns");

    std::unordered_set<std::string> seen;
    for (const auto& label : asset_labels_) {
        if (!seen.insert(label).second)
            throw DataError("duplicate asset label: " + label);
    }
    for (std::size_t t = 1; t < period_labels_.size(); ++t) {
        if (!(period_labels_[t - 1] < period_labels_[t]))
            throw DataError("period labels not strictly increasing at row " + std::to_string(t) +
                            " (" + period_labels_[t - 1] + " !< " + period_labels_[t] + ")");
    }
}

int ReturnPanel::column_of(const std::string& label) const {
    auto it = std::find(asset_labels_.begin(), asset_labels_.end(), label);
    if (it == asset_labels_.end()) throw DataError("unknown asset label: " + label);
    return static_cast<int>(it - asset_labels_.begin());
}

ReturnPanel load_panel(std::istream& in, const CsvOptions& options) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty CSV input");
    const auto header = split_csv_line(line);

    int date_col = -1;
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (header[j] == options.date_column) {
            date_col = static_cast<int>(j);
            break;
        }
    }
    if (date_col < 0)
        throw DataError("date column '" + options.date_column + "' not found in CSV header");

    std::vector<std::string> labels;
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (static_cast<int>(j) != date_col) labels.push_back(header[j]);
    }
    if (labels.size() < 2) throw DataError("CSV has fewer than 2 asset columns");
    {
        std::unordered_set<std::string> seen;
        for (const auto& label : labels)
            if (!seen.insert(label).second) throw DataError("duplicate asset label: " + label);
    }

    std::vector<std::string> periods;
    std::vector<double> data;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_csv_line(line);
        std::vector<double> row(labels.size());
        bool complete = fields.size() == header.size();
        if (complete) {
            std::size_t k = 0;
            for (std::size_t j = 0; j < fields.size(); ++j) {
                if (static_cast<int>(j) == date_col) continue;
                if (!parse_double(fields[j], row[k])) {
                    complete = false;
                    break;
                }
                ++k;
            }
        }
        if (!complete) {
            if (options.drop_incomplete_rows) continue;
            throw DataError("non-numeric or missing cell at CSV line " + std::to_string(line_no));
        }
        periods.push_back(fields[static_cast<std::size_t>(date_col)]);
        data.insert(data.end(), row.begin(), row.end());
    }

    Eigen::MatrixXd values(static_cast<Eigen::Index>(periods.size()),
                           static_cast<Eigen::Index>(labels.size()));
    for (Eigen::Index t = 0; t < values.rows(); ++t)
        for (Eigen::Index j = 0; j < values.cols(); ++j)
            values(t, j) = options.scale * data[static_cast<std::size_t>(t * values.cols() + j)];

    return ReturnPanel(std::move(values), std::move(labels), std::move(periods));
}

ReturnPanel load_panel_file(const std::string& path, const CsvOptions& options) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open input file: " + path);
    return load_panel(in, options);
}

void save_panel(const ReturnPanel& panel, std::ostream& out, const std::string& date_column) {
    std::string line = date_column;
    for (const auto& label : panel.asset_labels()) {
        line += ',';
        line += label;
    }
    out << line << '\n';
    for (int t = 0; t < panel.T(); ++t) {
        line = panel.period_labels()[static_cast<std::size_t>(t)];
        for (int j = 0; j < panel.d(); ++j) {
            line += ',';
            format_value(line, panel.values()(t, j));
        }
        out << line << '\n';
    }
}

void save_panel_file(const ReturnPanel& panel, const std::string& path,
                     const std::string& date_column) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open output file: " + path);
    save_panel(panel, out, date_column);
}

ReturnPanel align_common_sample(const std::vector<ReturnPanel>& panels) {
    if (panels.empty()) throw UsageError("align_common_sample needs at least one panel");

    std::set<std::string> common(panels.front().period_labels().begin(),
                                 panels.front().period_labels().end());
    for (std::size_t p = 1; p < panels.size(); ++p) {
        std::set<std::string> next;
        for (const auto& label : panels[p].period_labels()) {
            if (common.count(label)) next.insert(label);
        }
        common.swap(next);
    }
    if (common.empty()) throw DataError("panels share no common periods");

    std::vector<std::string> periods(common.begin(), common.end());
    std::vector<std::string> labels;
    int total_cols = 0;
    for (const auto& panel : panels) total_cols += panel.d();

    Eigen::MatrixXd values(static_cast<Eigen::Index>(periods.size()), total_cols);
    int col = 0;
    for (const auto& panel : panels) {
        std::unordered_map<std::string, int> row_of;
        row_of.reserve(panel.period_labels().size());
        for (int t = 0; t < panel.T(); ++t)
            row_of.emplace(panel.period_labels()[static_cast<std::size_t>(t)], t);
        for (std::size_t t = 0; t < periods.size(); ++t) {
            const int src = row_of.at(periods[t]);
            values.block(static_cast<Eigen::Index>(t), col, 1, panel.d()) =
                panel.values().row(src);
        }
        labels.insert(labels.end(), panel.asset_labels().begin(), panel.asset_labels().end());
        col += panel.d();
    }

    return ReturnPanel(std::move(values), std::move(labels), std::move(periods));
}

PanelDiagnostics validate_panel(const ReturnPanel& panel) {
    const auto& values = panel.values();
    const double T = static_cast<double>(panel.T());

    PanelDiagnostics diag;
    diag.sample_mean = values.colwise().mean();
    Eigen::MatrixXd centered = values.rowwise() - diag.sample_mean.transpose();
    diag.sample_cov = (centered.transpose() * centered) / T;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(diag.sample_cov,
                                                          Eigen::EigenvaluesOnly);
    const auto& eigenvalues = solver.eigenvalues();
    diag.min_cov_eigenvalue = eigenvalues.minCoeff();
    const double max_eig = eigenvalues.maxCoeff();
    diag.condition_number = diag.min_cov_eigenvalue > 0.0
                                ? max_eig / diag.min_cov_eigenvalue
                                : std::numeric_limits<double>::infinity();
    return diag;
}

void require_estimable(const ReturnPanel& panel) {
    const auto diag = validate_panel(panel);
    // min eigenvalue > 1e-10 x max eigenvalue, i.e. condition number < 1e10
    if (!(diag.min_cov_eigenvalue > 0.0) || !(diag.condition_number < 1e10))
        throw NumericalError("sample covariance is numerically singular (min eigenvalue " +
                             std::to_string(diag.min_cov_eigenvalue) + ", condition number " +
                             std::to_string(diag.condition_number) + ")");
}

}  // namespace mss
