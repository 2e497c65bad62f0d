#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <string>
#include <vector>

namespace mss {

/// CSV ingestion options. `scale` is applied to every return on load
/// (0.01 converts percent to decimal units).
struct CsvOptions {
    std::string date_column = "date";
    bool drop_incomplete_rows = false;
    double scale = 1.0;
};

/// A T-by-d panel of per-period asset returns. Immutable after construction;
/// safe to share across threads.
///
/// Invariants enforced on construction:
///   - all entries finite
///   - asset labels unique, d >= 2
///   - period labels strictly increasing, T > d + 1
class ReturnPanel {
public:
    ReturnPanel(Eigen::MatrixXd values, std::vector<std::string> asset_labels,
                std::vector<std::string> period_labels);

    const Eigen::MatrixXd& values() const { return values_; }
    const std::vector<std::string>& asset_labels() const { return asset_labels_; }
    const std::vector<std::string>& period_labels() const { return period_labels_; }

    int T() const { return static_cast<int>(values_.rows()); }
    int d() const { return static_cast<int>(values_.cols()); }

    /// Zero-based column index of a label; throws DataError if absent.
    int column_of(const std::string& label) const;

private:
    Eigen::MatrixXd values_;
    std::vector<std::string> asset_labels_;
    std::vector<std::string> period_labels_;
};

/// Sample-level moment summary. Covariance uses the divisor-T convention.
struct PanelDiagnostics {
    Eigen::VectorXd sample_mean;
    Eigen::MatrixXd sample_cov;
    double min_cov_eigenvalue = 0.0;
    double condition_number = 0.0;
};

/// Parse a returns panel from CSV: header row, one date column, remaining
/// columns numeric. Column order follows the file.
ReturnPanel load_panel(std::istream& in, const CsvOptions& options = {});
ReturnPanel load_panel_file(const std::string& path, const CsvOptions& options = {});

/// Write the same CSV layout back out (round-trips through load_panel).
void save_panel(const ReturnPanel& panel, std::ostream& out,
                const std::string& date_column = "date");
void save_panel_file(const ReturnPanel& panel, const std::string& path,
                     const std::string& date_column = "date");

/// Horizontal join restricted to the intersection of period labels.
/// Column order is the concatenation order of the inputs.
ReturnPanel align_common_sample(const std::vector<ReturnPanel>& panels);

/// Reporting only; downstream estimation rejects near-singular covariance.
PanelDiagnostics validate_panel(const ReturnPanel& panel);

/// Throws NumericalError when min eigenvalue < 1e-10 x max eigenvalue.
void require_estimable(const ReturnPanel& panel);

}  // namespace mss
