#pragma once

#include "mss/panel.hpp"

#include <vector>

namespace mss {

/// Least-squares fit of one asset's return on an intercept and a set of
/// regressor assets. `q_inv` is the inverse regressor moment matrix
/// ((p+1)x(p+1) over [1, R_regressors]) used in the statistic standardizers.
struct RegressionFit {
    int asset_index = 0;
    std::vector<int> regressors;
    double alpha_hat = 0.0;
    Eigen::VectorXd beta_hat;
    Eigen::VectorXd residuals;
    double sigma2_eps_hat = 0.0;
    Eigen::MatrixXd q_inv;
};

/// Per-asset spanning summary: the two t-ratios for alpha = 0 and
/// sum(beta) = 1, and their maximum.
struct SpanningStat {
    int asset_index = 0;
    double alpha_hat = 0.0;
    double beta_sum_hat = 0.0;
    double s1 = 0.0;
    double s2 = 0.0;
    double t_alpha = 0.0;
    double t_beta = 0.0;
    double m_stat = 0.0;
};

/// Known first two moments, for the population identification oracle.
struct PopulationModel {
    Eigen::VectorXd mu;
    Eigen::MatrixXd sigma;
};

/// Exact projection coefficients of asset i on the remaining assets implied
/// by a population model.
struct PopulationFit {
    double alpha = 0.0;
    double beta_sum = 0.0;
    double sigma2_tilde = 0.0;
};

RegressionFit fit_regression(const ReturnPanel& panel, int target,
                             const std::vector<int>& regressors);

/// Regression of asset i on all other assets.
RegressionFit fit_exclusion_regression(const ReturnPanel& panel, int asset);

SpanningStat spanning_statistic(const RegressionFit& fit, int T);

/// Exclusion-regression statistics for every asset, in asset order.
std::vector<SpanningStat> spanning_statistics_all(const ReturnPanel& panel);

PopulationFit population_regression(const PopulationModel& model, int asset);

/// Union of the supports of sigma^{-1} mu and sigma^{-1} 1, with absolute
/// threshold 1e-10 for "nonzero". Sorted ascending; never empty.
std::vector<int> population_mss(const PopulationModel& model);

}  // namespace mss
