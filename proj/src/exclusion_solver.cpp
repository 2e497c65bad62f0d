#include "mss/detail/exclusion_solver.hpp"

#include <cmath>

namespace mss::detail {

void moment_matrix(const Eigen::MatrixXd& values, const std::vector<int>& rows,
                   Eigen::MatrixXd& smat, Eigen::MatrixXd& gather) {
    const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
    const Eigen::Index d = values.cols();
    gather.resize(n, d + 1);
    gather.col(0).setOnes();
    for (Eigen::Index t = 0; t < n; ++t)
        gather.block(t, 1, 1, d) = values.row(rows[static_cast<std::size_t>(t)]);

    smat.setZero(d + 1, d + 1);
    smat.selfadjointView<Eigen::Lower>().rankUpdate(gather.transpose(), 1.0 / double(n));
    smat.triangularView<Eigen::StrictlyUpper>() = smat.transpose();
}

void moment_matrix(const Eigen::MatrixXd& values, Eigen::MatrixXd& smat,
                   Eigen::MatrixXd& gather) {
    std::vector<int> rows(static_cast<std::size_t>(values.rows()));
    for (std::size_t t = 0; t < rows.size(); ++t) rows[t] = static_cast<int>(t);
    moment_matrix(values, rows, smat, gather);
}

bool ExclusionSolver::factor(const Eigen::MatrixXd& smat, const std::vector<int>& regressors) {
    const int p = static_cast<int>(regressors.size());
    positions_.assign(1, 0);
    for (int r : regressors) positions_.push_back(1 + r);

    q_.resize(p + 1, p + 1);
    for (int j = 0; j <= p; ++j)
        for (int k = 0; k <= p; ++k)
            q_(j, k) = smat(positions_[static_cast<std::size_t>(j)],
                            positions_[static_cast<std::size_t>(k)]);

    llt_.compute(q_);
    if (llt_.info() != Eigen::Success || llt_.rcond() < kRcondFloor) return false;

    b_.setZero(p + 1);
    b_(0) = 1.0;
    theta_ = llt_.solve(b_);
    intercept_quad_ = theta_(0);

    b_.setOnes();
    b_(0) = 0.0;
    theta_ = llt_.solve(b_);
    beta_quad_ = theta_.tail(p).sum();

    return intercept_quad_ > 0.0 && beta_quad_ > 0.0;
}

AssetSolve ExclusionSolver::solve(const Eigen::MatrixXd& smat, int target) const {
    const int p = static_cast<int>(positions_.size()) - 1;
    const int tau = 1 + target;

    for (int j = 0; j <= p; ++j) b_(j) = smat(positions_[static_cast<std::size_t>(j)], tau);
    theta_ = llt_.solve(b_);

    AssetSolve out;
    out.alpha = theta_(0);
    out.beta_sum = theta_.tail(p).sum();
    out.sigma2 = smat(tau, tau) - b_.dot(theta_);

    const double var_y = smat(tau, tau) - smat(0, tau) * smat(0, tau);
    out.ok = var_y > 0.0 && out.sigma2 > kResidualRelFloor * var_y;
    if (out.ok) {
        out.s1 = std::sqrt(out.sigma2 * intercept_quad_);
        out.s2 = std::sqrt(out.sigma2 * beta_quad_);
    }
    return out;
}

Eigen::VectorXd ExclusionSolver::coefficients(const Eigen::MatrixXd& smat, int target) const {
    const int p = static_cast<int>(positions_.size()) - 1;
    const int tau = 1 + target;
    for (int j = 0; j <= p; ++j) b_(j) = smat(positions_[static_cast<std::size_t>(j)], tau);
    theta_ = llt_.solve(b_);
    return theta_;
}

Eigen::MatrixXd ExclusionSolver::inverse() const {
    const Eigen::Index n = q_.rows();
    return llt_.solve(Eigen::MatrixXd::Identity(n, n));
}

}  // namespace mss::detail
