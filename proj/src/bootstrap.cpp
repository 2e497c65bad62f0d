#include "mss/bootstrap.hpp"

#include "mss/detail/exclusion_solver.hpp"
#include "mss/errors.hpp"
#include "mss/rng.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <set>

namespace mss {

namespace {

constexpr int kMaxRedraws = 100;

int resolve_threads(int threads) {
    return threads > 0 ? threads : omp_get_max_threads();
}

void validate_plan(const StatisticPlan& plan, int d) {
    if (plan.candidates.empty()) throw UsageError("statistic plan has no candidate assets");
    std::set<int> seen;
    for (int c : plan.candidates) {
        if (c < 0 || c >= d) throw UsageError("candidate asset index out of range");
        if (!seen.insert(c).second) throw UsageError("duplicate candidate asset");
    }
    for (int k : plan.benchmark) {
        if (k < 0 || k >= d) throw UsageError("benchmark asset index out of range");
        if (seen.count(k)) throw UsageError("benchmark and candidate sets overlap");
    }
}

/// Per-thread scratch for the replication worker.
struct Workspace {
    Eigen::MatrixXd smat;
    Eigen::MatrixXd gather;
    detail::ExclusionSolver solver;
    std::vector<int> indices;
    std::vector<int> regressors;
    std::vector<double> row;
};

double assemble_statistic(StatisticForm form, double root_t, const detail::AssetSolve& sol,
                          double alpha0, double beta_sum0) {
    const double t_alpha = root_t * std::abs(sol.alpha - alpha0) / sol.s1;
    const double t_beta = root_t * std::abs(sol.beta_sum - beta_sum0) / sol.s2;
    switch (form) {
        case StatisticForm::MaxBoth:
            return std::max(t_alpha, t_beta);
        case StatisticForm::AlphaAbs:
            return t_alpha;
        case StatisticForm::BetaAbs:
            return t_beta;
        case StatisticForm::AlphaSigned:
            return root_t * (sol.alpha - alpha0) / sol.s1;
    }
    return 0.0;
}

/// One bootstrap replication: resample, refit every candidate, assemble the
/// recentered statistics. Returns redraws used, or -1 when the redraw budget
/// is exhausted. Row layout matches plan.candidates.
int replicate(const Eigen::MatrixXd& values, const BlockPlan& plan,
              const StatisticPlan& stat_plan, const std::vector<SpanningStat>& baseline,
              std::uint64_t seed, int b, Workspace& ws, double* row) {
    const int d = static_cast<int>(values.cols());
    const int n_cand = static_cast<int>(stat_plan.candidates.size());
    const double root_t = std::sqrt(double(plan.T));
    const bool on_benchmark = !stat_plan.benchmark.empty();

    for (int attempt = 0; attempt <= kMaxRedraws; ++attempt) {
        auto rng = rng::make_stream(seed, rng::StreamKind::Bootstrap,
                                    static_cast<std::uint64_t>(b),
                                    static_cast<std::uint64_t>(attempt));
        ws.indices = resample_indices(plan, rng);
        detail::moment_matrix(values, ws.indices, ws.smat, ws.gather);

        bool good = true;
        if (on_benchmark && !ws.solver.factor(ws.smat, stat_plan.benchmark)) good = false;

        for (int c = 0; good && c < n_cand; ++c) {
            const int asset = stat_plan.candidates[static_cast<std::size_t>(c)];
            if (!on_benchmark) {
                ws.regressors.clear();
                for (int j = 0; j < d; ++j)
                    if (j != asset) ws.regressors.push_back(j);
                if (!ws.solver.factor(ws.smat, ws.regressors)) {
                    good = false;
                    break;
                }
            }
            const auto sol = ws.solver.solve(ws.smat, asset);
            if (!sol.ok) {
                good = false;
                break;
            }
            const auto& base = baseline[static_cast<std::size_t>(c)];
            const double stat =
                assemble_statistic(stat_plan.form, root_t, sol, base.alpha_hat,
                                   base.beta_sum_hat);
            if (!std::isfinite(stat)) {
                good = false;
                break;
            }
            row[c] = stat;
        }
        if (good) return attempt;
    }
    return -1;
}

BootstrapDraws run_bootstrap(const ReturnPanel& panel, const BlockPlan& plan, int B,
                             std::uint64_t seed, const StatisticPlan& stat_plan, int threads,
                             bool parallel) {
    if (B < 1) throw UsageError("bootstrap replication count must be positive");
    if (plan.T != panel.T()) throw UsageError("block plan sample size does not match panel");
    validate_plan(stat_plan, panel.d());

    const auto baseline = plan_statistics(panel, stat_plan);
    const int n_cand = static_cast<int>(stat_plan.candidates.size());

    BootstrapDraws out;
    out.m_boot.resize(B, n_cand);
    out.B = B;
    out.plan = plan;
    out.seed = seed;
    out.assets = stat_plan.candidates;

    std::vector<int> redraws(static_cast<std::size_t>(B), 0);

    if (parallel) {
        const int n_threads = resolve_threads(threads);
#pragma omp parallel num_threads(n_threads)
        {
            Workspace ws;
            ws.row.resize(static_cast<std::size_t>(n_cand));
#pragma omp for schedule(dynamic, 8)
            for (int b = 0; b < B; ++b) {
                redraws[static_cast<std::size_t>(b)] = replicate(
                    panel.values(), plan, stat_plan, baseline, seed, b, ws, ws.row.data());
                for (int c = 0; c < n_cand; ++c)
                    out.m_boot(b, c) = ws.row[static_cast<std::size_t>(c)];
            }
        }
    } else {
        Workspace ws;
        ws.row.resize(static_cast<std::size_t>(n_cand));
        for (int b = 0; b < B; ++b) {
            redraws[static_cast<std::size_t>(b)] = replicate(
                panel.values(), plan, stat_plan, baseline, seed, b, ws, ws.row.data());
            for (int c = 0; c < n_cand; ++c)
                out.m_boot(b, c) = ws.row[static_cast<std::size_t>(c)];
        }
    }

    out.redraw_count = 0;
    for (int b = 0; b < B; ++b) {
        const int r = redraws[static_cast<std::size_t>(b)];
        if (r < 0)
            throw NumericalError("bootstrap replication " + std::to_string(b) +
                                 " stayed degenerate after " + std::to_string(kMaxRedraws) +
                                 " redraws");
        out.redraw_count += r;
    }
    return out;
}

}  // namespace

BlockPlan make_block_plan(int T, int block_len) {
    if (T < 2) throw UsageError("block plan needs T >= 2");
    if (block_len < 1 || block_len > T)
        throw UsageError("block length must lie in [1, T], got " + std::to_string(block_len));
    BlockPlan plan;
    plan.T = T;
    plan.block_len = block_len;
    plan.q = T - block_len + 1;
    plan.m = T / block_len;
    plan.t_b = plan.m * block_len;
    return plan;
}

int default_block_len(int T) {
    if (T < 2) throw UsageError("block length rule needs T >= 2");
    const int len = static_cast<int>(std::floor(1.2 * std::pow(double(T), 0.25)));
    return std::max(1, len);
}

StatisticPlan exclusion_plan(int d) {
    StatisticPlan plan;
    plan.candidates.resize(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) plan.candidates[static_cast<std::size_t>(i)] = i;
    return plan;
}

std::vector<int> resample_indices(const BlockPlan& plan, std::mt19937_64& rng) {
    std::vector<int> indices(static_cast<std::size_t>(plan.t_b));
    std::uniform_int_distribution<int> start(0, plan.q - 1);
    for (int j = 0; j < plan.m; ++j) {
        const int s = start(rng);
        for (int l = 0; l < plan.block_len; ++l)
            indices[static_cast<std::size_t>(j * plan.block_len + l)] = s + l;
    }
    return indices;
}

std::vector<SpanningStat> plan_statistics(const ReturnPanel& panel, const StatisticPlan& plan) {
    validate_plan(plan, panel.d());
    require_estimable(panel);

    Eigen::MatrixXd smat, gather;
    detail::moment_matrix(panel.values(), smat, gather);

    const bool on_benchmark = !plan.benchmark.empty();
    detail::ExclusionSolver solver;
    if (on_benchmark && !solver.factor(smat, plan.benchmark))
        throw NumericalError("singular benchmark moment matrix");

    const double root_t = std::sqrt(double(panel.T()));
    std::vector<SpanningStat> stats;
    stats.reserve(plan.candidates.size());
    std::vector<int> regressors;
    for (int asset : plan.candidates) {
        if (!on_benchmark) {
            regressors.clear();
            for (int j = 0; j < panel.d(); ++j)
                if (j != asset) regressors.push_back(j);
            if (!solver.factor(smat, regressors))
                throw NumericalError(
                    "singular regressor moment matrix when fitting asset '" +
                    panel.asset_labels()[static_cast<std::size_t>(asset)] + "'");
        }
        const auto sol = solver.solve(smat, asset);
        if (!sol.ok)
            throw NumericalError("degenerate residual variance for asset '" +
                                 panel.asset_labels()[static_cast<std::size_t>(asset)] + "'");
        SpanningStat stat;
        stat.asset_index = asset;
        stat.alpha_hat = sol.alpha;
        stat.beta_sum_hat = sol.beta_sum;
        stat.s1 = sol.s1;
        stat.s2 = sol.s2;
        stat.t_alpha = root_t * std::abs(sol.alpha) / sol.s1;
        stat.t_beta = root_t * std::abs(sol.beta_sum - 1.0) / sol.s2;
        stat.m_stat = assemble_statistic(plan.form, root_t, sol, 0.0, 1.0);
        stats.push_back(stat);
    }
    return stats;
}

BootstrapDraws bootstrap_draws(const ReturnPanel& panel, const BlockPlan& plan, int B,
                               std::uint64_t seed, const StatisticPlan& stat_plan,
                               int threads) {
    return run_bootstrap(panel, plan, B, seed, stat_plan, threads, true);
}

BootstrapDraws bootstrap_draws_serial(const ReturnPanel& panel, const BlockPlan& plan, int B,
                                      std::uint64_t seed, const StatisticPlan& stat_plan) {
    return run_bootstrap(panel, plan, B, seed, stat_plan, 1, false);
}

BootstrapDraws bootstrap_statistics(const ReturnPanel& panel, const BlockPlan& plan, int B,
                                    std::uint64_t seed, int threads) {
    return bootstrap_draws(panel, plan, B, seed, exclusion_plan(panel.d()), threads);
}

BootstrapDraws bootstrap_statistics_serial(const ReturnPanel& panel, const BlockPlan& plan,
                                           int B, std::uint64_t seed) {
    return bootstrap_draws_serial(panel, plan, B, seed, exclusion_plan(panel.d()));
}

}  // namespace mss
