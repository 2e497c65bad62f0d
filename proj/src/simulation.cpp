#include "mss/simulation.hpp"

#include "mss/errors.hpp"
#include "mss/rng.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace mss {

Eigen::MatrixXd var_coefficients(int K, double rho) {
    Eigen::MatrixXd a(K, K);
    for (int i = 0; i < K; ++i)
        for (int j = 0; j < K; ++j) a(i, j) = std::pow(rho, std::abs(i - j) + 1);
    return a;
}

namespace {

void check_stationary(const Eigen::MatrixXd& a) {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(a, false);
    const double radius = solver.eigenvalues().cwiseAbs().maxCoeff();
    if (!(radius < 1.0))
        throw NumericalError("VAR coefficient matrix is non-stationary (spectral radius " +
                             std::to_string(radius) + ")");
}

bool contains_all(const std::vector<int>& superset, const std::vector<int>& subset) {
    return std::includes(superset.begin(), superset.end(), subset.begin(), subset.end());
}

}  // namespace

void SimConfig::validate() const {
    if (benchmark_count < 1) throw UsageError("benchmark asset count must be >= 1");
    if (redundant_count < 0) throw UsageError("redundant asset count must be >= 0");
    const int d = benchmark_count + redundant_count;
    if (d < 2) throw UsageError("simulated panel needs at least 2 assets");
    if (T <= d + 1) throw UsageError("simulated panel needs T > d + 1");
    if (reps < 1) throw UsageError("replication count must be >= 1");
    if (!(level > 0.0 && level < 1.0)) throw UsageError("significance level must lie in (0,1)");
    if (B < 1) throw UsageError("bootstrap replication count must be >= 1");
    if (burn_in < 0) throw UsageError("burn-in must be >= 0");
    if (!(std::abs(rho) < 1.0)) throw UsageError("autoregression base must satisfy |rho| < 1");
    if (block_len < 0 || block_len > T) throw UsageError("block length must lie in [0, T]");
}

std::string SimConfig::panel_id() const {
    return "K" + std::to_string(benchmark_count) + "N" + std::to_string(redundant_count);
}

ReturnPanel simulate_var_garch(const SimConfig& config, std::mt19937_64& rng) {
    config.validate();
    const int K = config.benchmark_count;
    const int N = config.redundant_count;
    const int d = K + N;

    const Eigen::MatrixXd a = var_coefficients(K, config.rho);
    check_stationary(a);
    const double mix_weight = N > 0 ? 1.0 / double(K) : 0.0;

    std::normal_distribution<double> normal(0.0, 1.0);

    // stationary start: conditional sd at its unconditional level
    Eigen::VectorXd vol_prev = Eigen::VectorXd::Ones(d);
    Eigen::VectorXd eta_prev = Eigen::VectorXd::Zero(d);
    Eigen::VectorXd eta(d);
    Eigen::VectorXd r_k = Eigen::VectorXd::Constant(K, config.mu_level);

    Eigen::MatrixXd out(config.T, d);
    const int total = config.burn_in + config.T;
    for (int t = 0; t < total; ++t) {
        for (int i = 0; i < d; ++i) {
            const double vol = std::sqrt(0.1 + 0.1 * eta_prev(i) * eta_prev(i) +
                                         0.8 * vol_prev(i) * vol_prev(i));
            eta(i) = vol * normal(rng);
            vol_prev(i) = vol;
        }
        eta_prev = eta;

        r_k = Eigen::VectorXd::Constant(K, config.mu_level) + a * r_k + eta.head(K);
        if (t >= config.burn_in) {
            const int row = t - config.burn_in;
            out.row(row).head(K) = r_k;
            if (N > 0)
                out.row(row).tail(N) =
                    Eigen::VectorXd::Constant(N, mix_weight * r_k.sum()) + eta.tail(N);
        }
    }

    std::vector<std::string> labels;
    labels.reserve(static_cast<std::size_t>(d));
    for (int i = 0; i < K; ++i) labels.push_back("K" + std::to_string(i + 1));
    for (int i = 0; i < N; ++i) labels.push_back("N" + std::to_string(i + 1));

    std::vector<std::string> periods(static_cast<std::size_t>(config.T));
    for (int t = 0; t < config.T; ++t) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "t%06d", t + 1);
        periods[static_cast<std::size_t>(t)] = buf;
    }

    return ReturnPanel(std::move(out), std::move(labels), std::move(periods));
}

std::vector<int> true_mss(const SimConfig& config) {
    config.validate();
    std::vector<int> truth(static_cast<std::size_t>(config.benchmark_count));
    for (int i = 0; i < config.benchmark_count; ++i) truth[static_cast<std::size_t>(i)] = i;
    return truth;
}

std::vector<int> oracle_estimate(const std::vector<SpanningStat>& stats,
                                 const BootstrapDraws& draws,
                                 const std::vector<int>& true_set, double level) {
    std::vector<int> complement;
    for (int asset : draws.assets)
        if (!std::binary_search(true_set.begin(), true_set.end(), asset))
            complement.push_back(asset);

    const double cv =
        complement.empty() ? 0.0 : conditional_quantile(draws, complement, level);

    std::vector<int> selected;
    for (const auto& stat : stats)
        if (stat.m_stat > cv) selected.push_back(stat.asset_index);
    std::sort(selected.begin(), selected.end());
    return selected;
}

namespace {

struct RepOutcome {
    bool failed = false;
    bool proposed_contain = false;
    bool proposed_exact = false;
    bool oracle_contain = false;
    bool oracle_exact = false;
};

RepOutcome run_one_rep(const SimConfig& config, const BlockPlan& plan,
                       const StatisticPlan& stat_plan, const std::vector<int>& truth, int rep) {
    RepOutcome outcome;
    try {
        auto rng =
            rng::make_stream(config.seed, rng::StreamKind::Panel, static_cast<std::uint64_t>(rep));
        const ReturnPanel panel = simulate_var_garch(config, rng);
        const auto stats = plan_statistics(panel, stat_plan);
        const std::uint64_t boot_seed = rng::derive_seed(
            config.seed, rng::StreamKind::Simulation, static_cast<std::uint64_t>(rep));
        const auto draws = bootstrap_draws_serial(panel, plan, config.B, boot_seed, stat_plan);

        const auto proposed = stepdown_core(stats, draws, config.level, true);
        const auto oracle = oracle_estimate(stats, draws, truth, config.level);

        outcome.proposed_contain = contains_all(proposed.selected, truth);
        outcome.proposed_exact = proposed.selected == truth;
        outcome.oracle_contain = contains_all(oracle, truth);
        outcome.oracle_exact = oracle == truth;
    } catch (const std::exception&) {
        outcome.failed = true;
    }
    return outcome;
}

SimResult aggregate(const SimConfig& config, const std::vector<RepOutcome>& outcomes) {
    SimResult result;
    result.config = config;
    long pc = 0, pe = 0, oc = 0, oe = 0;
    for (const auto& o : outcomes) {
        if (o.failed) {
            ++result.failures;
            continue;
        }
        pc += o.proposed_contain;
        pe += o.proposed_exact;
        oc += o.oracle_contain;
        oe += o.oracle_exact;
    }
    if (result.failures * 100 >= config.reps)
        throw NumericalError(std::to_string(result.failures) + " of " +
                             std::to_string(config.reps) +
                             " replications failed (>= 1% budget)");
    result.reps_used = config.reps - result.failures;
    const double denom = double(result.reps_used);
    result.proposed = {double(pc) / denom, double(pe) / denom};
    result.oracle = {double(oc) / denom, double(oe) / denom};
    return result;
}

SimResult run_all(const SimConfig& config, int threads, bool parallel) {
    config.validate();
    const int d = config.benchmark_count + config.redundant_count;
    const int block_len =
        config.block_len > 0 ? config.block_len : default_block_len(config.T);
    const BlockPlan plan = make_block_plan(config.T, block_len);
    const StatisticPlan stat_plan = exclusion_plan(d);
    const std::vector<int> truth = true_mss(config);

    std::vector<RepOutcome> outcomes(static_cast<std::size_t>(config.reps));
    if (parallel) {
        const int n_threads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(n_threads)
        for (int rep = 0; rep < config.reps; ++rep)
            outcomes[static_cast<std::size_t>(rep)] =
                run_one_rep(config, plan, stat_plan, truth, rep);
    } else {
        for (int rep = 0; rep < config.reps; ++rep)
            outcomes[static_cast<std::size_t>(rep)] =
                run_one_rep(config, plan, stat_plan, truth, rep);
    }
    return aggregate(config, outcomes);
}

}  // namespace

SimResult run_experiment(const SimConfig& config, int threads) {
    return run_all(config, threads, true);
}

SimResult run_experiment_serial(const SimConfig& config) {
    return run_all(config, 1, false);
}

}  // namespace mss
