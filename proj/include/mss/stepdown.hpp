#pragma once

#include "mss/bootstrap.hpp"
#include "mss/regression.hpp"

#include <string>
#include <utility>
#include <vector>

namespace mss {

struct StepdownIteration {
    int iteration = 0;          // 1-based
    std::vector<int> selected;  // ascending asset indices after the iteration
    double cv = 0.0;            // critical value the iteration used
};

/// Result of the step-down selection. Trace sets are nested nondecreasing and
/// their critical values nonincreasing; `selected` equals {i : m_stat > final_cv}
/// unless the nonempty adjustment fired.
struct MssEstimate {
    std::vector<int> selected;
    double final_cv = 0.0;
    double level = 0.0;
    std::vector<StepdownIteration> trace;
    bool adjusted = false;
    std::vector<SpanningStat> stats;
};

enum class ExceedSource { None, Alpha, Beta, Both };

/// Simultaneous thresholds [0, s_{i,j} * cv / sqrt(T)] on |alpha| and
/// |sum(beta) - 1|.
struct ConfidenceBand {
    int asset_index = 0;
    double alpha_abs = 0.0;
    double alpha_bound = 0.0;
    double beta_abs = 0.0;
    double beta_bound = 0.0;
    bool in_mss = false;
    ExceedSource exceed_source = ExceedSource::None;
};

/// ceil((1-p)B)-th ascending order statistic of the per-row maximum over the
/// subset's columns. `subset` holds asset indices present in draws.assets.
double conditional_quantile(const BootstrapDraws& draws, const std::vector<int>& subset,
                            double level);

/// Step-down refinement from the empty set. `nonempty_adjustment` substitutes
/// the argmax asset when the selection ends empty; only estimation targets
/// that are provably nonempty should enable it.
MssEstimate stepdown_core(const std::vector<SpanningStat>& stats, const BootstrapDraws& draws,
                          double level, bool nonempty_adjustment);

/// Spanning-set estimate (nonempty adjustment on).
MssEstimate stepdown_estimate(const std::vector<SpanningStat>& stats,
                              const BootstrapDraws& draws, double level);

std::vector<ConfidenceBand> confidence_bands(const MssEstimate& estimate, int T);

/// Assets by descending statistic; ties broken by ascending asset index.
std::vector<std::pair<std::string, double>> rank_assets(
    const std::vector<SpanningStat>& stats, const std::vector<std::string>& labels);

}  // namespace mss
