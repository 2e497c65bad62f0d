#pragma once

#include <Eigen/Dense>

#include <vector>

namespace mss::detail {

// Shared breakdown thresholds: regressor moment matrices with condition
// number above 1/kRcondFloor are singular; residual variances below
// kResidualRelFloor x var(target) are degenerate.
inline constexpr double kRcondFloor = 1e-12;
inline constexpr double kResidualRelFloor = 1e-12;

struct AssetSolve {
    double alpha = 0.0;
    double beta_sum = 0.0;
    double s1 = 0.0;
    double s2 = 0.0;
    double sigma2 = 0.0;
    bool ok = false;
};

/// Accumulate S = n^{-1} sum_t x_t x_t' with x_t = [1, values.row(rows[t])']'.
/// All regressions on a sample derive from this one (d+1)x(d+1) matrix.
void moment_matrix(const Eigen::MatrixXd& values, const std::vector<int>& rows,
                   Eigen::MatrixXd& smat, Eigen::MatrixXd& gather);

/// Same over all rows in order.
void moment_matrix(const Eigen::MatrixXd& values, Eigen::MatrixXd& smat,
                   Eigen::MatrixXd& gather);

/// Least-squares solves against a fixed regressor set read off a moment
/// matrix. factor() pins the set; solve() evaluates one target. Reusable
/// workspace, not thread-safe across concurrent calls.
class ExclusionSolver {
public:
    /// false when the regressor moment matrix is singular to tolerance.
    bool factor(const Eigen::MatrixXd& smat, const std::vector<int>& regressors);

    AssetSolve solve(const Eigen::MatrixXd& smat, int target) const;

    /// Full coefficient vector [alpha, beta...] for one target, from the same
    /// factorization and right-hand side as solve().
    Eigen::VectorXd coefficients(const Eigen::MatrixXd& smat, int target) const;

    /// Entries of the factored inverse, for materializing Q^{-1}.
    Eigen::MatrixXd inverse() const;

private:
    std::vector<int> positions_;
    Eigen::MatrixXd q_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
    double intercept_quad_ = 0.0;  // e_1' Q^{-1} e_1
    double beta_quad_ = 0.0;       // a' Q^{-1} a with a = [0, 1, ..., 1]
    mutable Eigen::VectorXd b_;
    mutable Eigen::VectorXd theta_;
};

}  // namespace mss::detail
