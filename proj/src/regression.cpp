#include "mss/regression.hpp"

#include "mss/detail/exclusion_solver.hpp"
#include "mss/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace mss {

namespace {

constexpr double kSupportThreshold = 1e-10;

void check_target_and_regressors(const ReturnPanel& panel, int target,
                                 const std::vector<int>& regressors) {
    const int d = panel.d();
    if (target < 0 || target >= d) throw UsageError("asset index out of range");
    if (regressors.empty()) throw UsageError("regressor set is empty");
    std::set<int> seen;
    for (int r : regressors) {
        if (r < 0 || r >= d) throw UsageError("regressor index out of range");
        if (r == target) throw UsageError("target asset cannot regress on itself");
        if (!seen.insert(r).second) throw UsageError("duplicate regressor index");
    }
}

}  // namespace

RegressionFit fit_regression(const ReturnPanel& panel, int target,
                             const std::vector<int>& regressors) {
    check_target_and_regressors(panel, target, regressors);
    const auto& label = panel.asset_labels()[static_cast<std::size_t>(target)];

    Eigen::MatrixXd smat, gather;
    detail::moment_matrix(panel.values(), smat, gather);

    detail::ExclusionSolver solver;
    if (!solver.factor(smat, regressors))
        throw NumericalError("singular regressor moment matrix when fitting asset '" + label +
                             "'");
    const Eigen::VectorXd theta = solver.coefficients(smat, target);

    RegressionFit fit;
    fit.asset_index = target;
    fit.regressors = regressors;
    fit.alpha_hat = theta(0);
    fit.q_inv = solver.inverse();

    const int p = static_cast<int>(regressors.size());
    fit.beta_hat = theta.tail(p);

    const auto& values = panel.values();
    fit.residuals = values.col(target).array() - fit.alpha_hat;
    for (int j = 0; j < p; ++j)
        fit.residuals -= fit.beta_hat(j) * values.col(regressors[static_cast<std::size_t>(j)]);
    fit.sigma2_eps_hat = fit.residuals.squaredNorm() / double(panel.T());

    const double var_y =
        smat(1 + target, 1 + target) - smat(0, 1 + target) * smat(0, 1 + target);
    if (!(var_y > 0.0) || !(fit.sigma2_eps_hat > detail::kResidualRelFloor * var_y))
        throw NumericalError("degenerate residual variance for asset '" + label + "'");

    return fit;
}

RegressionFit fit_exclusion_regression(const ReturnPanel& panel, int asset) {
    std::vector<int> regressors;
    regressors.reserve(static_cast<std::size_t>(panel.d()) - 1);
    for (int j = 0; j < panel.d(); ++j)
        if (j != asset) regressors.push_back(j);
    return fit_regression(panel, asset, regressors);
}

SpanningStat spanning_statistic(const RegressionFit& fit, int T) {
    if (!(fit.sigma2_eps_hat > 0.0)) throw NumericalError("non-positive residual variance");

    const int p = static_cast<int>(fit.beta_hat.size());
    const double intercept_quad = fit.q_inv(0, 0);
    const double beta_quad = fit.q_inv.block(1, 1, p, p).sum();
    if (!(intercept_quad > 0.0) || !(beta_quad > 0.0))
        throw NumericalError("non-positive standardizer quadratic form");

    SpanningStat stat;
    stat.asset_index = fit.asset_index;
    stat.alpha_hat = fit.alpha_hat;
    stat.beta_sum_hat = fit.beta_hat.sum();
    stat.s1 = std::sqrt(fit.sigma2_eps_hat * intercept_quad);
    stat.s2 = std::sqrt(fit.sigma2_eps_hat * beta_quad);
    const double root_t = std::sqrt(double(T));
    stat.t_alpha = root_t * std::abs(stat.alpha_hat) / stat.s1;
    stat.t_beta = root_t * std::abs(stat.beta_sum_hat - 1.0) / stat.s2;
    stat.m_stat = std::max(stat.t_alpha, stat.t_beta);
    return stat;
}

std::vector<SpanningStat> spanning_statistics_all(const ReturnPanel& panel) {
    require_estimable(panel);
    std::vector<SpanningStat> stats;
    stats.reserve(static_cast<std::size_t>(panel.d()));
    for (int i = 0; i < panel.d(); ++i)
        stats.push_back(spanning_statistic(fit_exclusion_regression(panel, i), panel.T()));
    return stats;
}

PopulationFit population_regression(const PopulationModel& model, int asset) {
    const int d = static_cast<int>(model.sigma.rows());
    if (d < 2 || model.sigma.cols() != d || model.mu.size() != d)
        throw UsageError("population model dimensions inconsistent");
    if (asset < 0 || asset >= d) throw UsageError("asset index out of range");

    Eigen::MatrixXd sigma_rest(d - 1, d - 1);
    Eigen::VectorXd gamma(d - 1);
    Eigen::VectorXd mu_rest(d - 1);
    int jj = 0;
    for (int j = 0; j < d; ++j) {
        if (j == asset) continue;
        gamma(jj) = model.sigma(asset, j);
        mu_rest(jj) = model.mu(j);
        int kk = 0;
        for (int k = 0; k < d; ++k) {
            if (k == asset) continue;
            sigma_rest(jj, kk) = model.sigma(j, k);
            ++kk;
        }
        ++jj;
    }

    Eigen::LLT<Eigen::MatrixXd> llt(sigma_rest);
    if (llt.info() != Eigen::Success)
        throw NumericalError("population covariance is not positive definite");
    const Eigen::VectorXd beta = llt.solve(gamma);

    PopulationFit fit;
    fit.alpha = model.mu(asset) - mu_rest.dot(beta);
    fit.beta_sum = beta.sum();
    fit.sigma2_tilde = model.sigma(asset, asset) - gamma.dot(beta);
    if (!(fit.sigma2_tilde > 0.0))
        throw NumericalError("population projection has non-positive residual variance");
    return fit;
}

std::vector<int> population_mss(const PopulationModel& model) {
    const int d = static_cast<int>(model.sigma.rows());
    if (d < 2 || model.sigma.cols() != d || model.mu.size() != d)
        throw UsageError("population model dimensions inconsistent");

    Eigen::LLT<Eigen::MatrixXd> llt(model.sigma);
    if (llt.info() != Eigen::Success)
        throw NumericalError("population covariance is singular");

    const Eigen::VectorXd tangency = llt.solve(model.mu);
    const Eigen::VectorXd gmv = llt.solve(Eigen::VectorXd::Ones(d));

    std::vector<int> support;
    for (int i = 0; i < d; ++i) {
        if (std::abs(tangency(i)) > kSupportThreshold || std::abs(gmv(i)) > kSupportThreshold)
            support.push_back(i);
    }
    if (support.empty())
        throw NumericalError("population spanning support is empty to tolerance");
    return support;
}

}  // namespace mss
