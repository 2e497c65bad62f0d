#pragma once

#include "mss/panel.hpp"
#include "mss/regression.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace mss {

/// Moving-blocks layout for a sample of length T: q = T - l + 1 overlapping
/// blocks of length l, m = floor(T/l) blocks per resample, T_B = m*l.
struct BlockPlan {
    int T = 0;
    int block_len = 0;
    int q = 0;
    int m = 0;
    int t_b = 0;
};

BlockPlan make_block_plan(int T, int block_len);

/// Bandwidth rule max(1, floor(1.2 * T^{1/4})).
int default_block_len(int T);

/// Which statistic a draws column carries.
enum class StatisticForm {
    MaxBoth,      // max of the two absolute t-ratios
    AlphaAbs,     // intercept t-ratio only
    BetaAbs,      // coefficient-sum t-ratio only
    AlphaSigned,  // signed intercept t-ratio (one-sided selection)
};

/// Candidate columns and regression design for a bootstrap run. An empty
/// `benchmark` means exclusion regressions (each candidate on all other
/// assets); otherwise every candidate regresses on the benchmark set.
struct StatisticPlan {
    std::vector<int> candidates;
    std::vector<int> benchmark;
    StatisticForm form = StatisticForm::MaxBoth;
};

/// All assets as candidates, exclusion regressions, MaxBoth.
StatisticPlan exclusion_plan(int d);

/// B x candidates matrix of bootstrap statistics plus resampling bookkeeping.
struct BootstrapDraws {
    Eigen::MatrixXd m_boot;
    int B = 0;
    BlockPlan plan;
    std::uint64_t seed = 0;
    long redraw_count = 0;
    std::vector<int> assets;  // column -> panel asset index
};

/// Concatenation of m blocks with starts drawn uniformly from {0,...,q-1}.
/// Zero-based row indices, length T_B.
std::vector<int> resample_indices(const BlockPlan& plan, std::mt19937_64& rng);

/// Original-sample statistics for a plan, computed through the same moment
/// path as the bootstrap replications (the recentering baseline).
std::vector<SpanningStat> plan_statistics(const ReturnPanel& panel, const StatisticPlan& plan);

/// OpenMP kernel over replications. Deterministic for a given seed under any
/// thread count: replication b depends only on (seed, b) and writes row b.
BootstrapDraws bootstrap_draws(const ReturnPanel& panel, const BlockPlan& plan, int B,
                               std::uint64_t seed, const StatisticPlan& stat_plan,
                               int threads = 0);

/// Serial reference driver, kept for testing the parallel kernel.
BootstrapDraws bootstrap_draws_serial(const ReturnPanel& panel, const BlockPlan& plan, int B,
                                      std::uint64_t seed, const StatisticPlan& stat_plan);

/// Exclusion-regression bootstrap over all assets.
BootstrapDraws bootstrap_statistics(const ReturnPanel& panel, const BlockPlan& plan, int B,
                                    std::uint64_t seed, int threads = 0);
BootstrapDraws bootstrap_statistics_serial(const ReturnPanel& panel, const BlockPlan& plan,
                                           int B, std::uint64_t seed);

}  // namespace mss
