#include "mss/stepdown.hpp"

#include "mss/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mss {

namespace {

int quantile_rank(double level, int B) {
    // smallest integer >= (1-p)B, with slack for inexact (1-p)*B
    int k = static_cast<int>(std::ceil((1.0 - level) * double(B) - 1e-9));
    return std::clamp(k, 1, B);
}

void check_level(double level) {
    if (!(level > 0.0 && level < 1.0))
        throw UsageError("significance level must lie in (0,1)");
}

}  // namespace

double conditional_quantile(const BootstrapDraws& draws, const std::vector<int>& subset,
                            double level) {
    check_level(level);
    if (subset.empty()) throw UsageError("conditional quantile over an empty asset set");

    std::vector<int> cols;
    cols.reserve(subset.size());
    for (int asset : subset) {
        auto it = std::find(draws.assets.begin(), draws.assets.end(), asset);
        if (it == draws.assets.end())
            throw UsageError("asset " + std::to_string(asset) + " not present in draws");
        cols.push_back(static_cast<int>(it - draws.assets.begin()));
    }

    const int B = draws.B;
    std::vector<double> row_max(static_cast<std::size_t>(B));
    for (int b = 0; b < B; ++b) {
        double m = draws.m_boot(b, cols.front());
        for (std::size_t j = 1; j < cols.size(); ++j)
            m = std::max(m, draws.m_boot(b, cols[j]));
        row_max[static_cast<std::size_t>(b)] = m;
    }

    const int k = quantile_rank(level, B);
    std::nth_element(row_max.begin(), row_max.begin() + (k - 1), row_max.end());
    return row_max[static_cast<std::size_t>(k - 1)];
}

MssEstimate stepdown_core(const std::vector<SpanningStat>& stats, const BootstrapDraws& draws,
                          double level, bool nonempty_adjustment) {
    check_level(level);
    if (stats.size() != draws.assets.size())
        throw UsageError("statistics and draws cover different candidate sets");
    for (std::size_t j = 0; j < stats.size(); ++j)
        if (stats[j].asset_index != draws.assets[j])
            throw UsageError("statistics and draws are not aligned by asset");

    MssEstimate est;
    est.level = level;
    est.stats = stats;

    const std::vector<int>& universe = draws.assets;
    std::vector<int> previous;
    int iteration = 0;
    while (true) {
        ++iteration;
        std::vector<int> complement;
        for (int asset : universe)
            if (!std::binary_search(previous.begin(), previous.end(), asset))
                complement.push_back(asset);

        const double cv =
            complement.empty() ? 0.0 : conditional_quantile(draws, complement, level);

        std::vector<int> selected;
        for (const auto& stat : stats)
            if (stat.m_stat > cv) selected.push_back(stat.asset_index);
        std::sort(selected.begin(), selected.end());

        est.trace.push_back({iteration, selected, cv});

        if (selected == previous) {
            est.selected = selected;
            est.final_cv = cv;
            break;
        }
        if (selected.size() == universe.size()) {
            // complement is empty: the critical value collapses to zero
            est.selected = selected;
            est.final_cv = 0.0;
            break;
        }
        previous = std::move(selected);
    }

    if (est.selected.empty() && nonempty_adjustment) {
        int best = stats.front().asset_index;
        double best_stat = stats.front().m_stat;
        for (const auto& stat : stats) {
            if (stat.m_stat > best_stat) {
                best_stat = stat.m_stat;
                best = stat.asset_index;
            }
        }
        est.selected = {best};
        est.adjusted = true;
    }
    return est;
}

MssEstimate stepdown_estimate(const std::vector<SpanningStat>& stats,
                              const BootstrapDraws& draws, double level) {
    return stepdown_core(stats, draws, level, true);
}

std::vector<ConfidenceBand> confidence_bands(const MssEstimate& estimate, int T) {
    const double scale = estimate.final_cv / std::sqrt(double(T));
    std::vector<ConfidenceBand> bands;
    bands.reserve(estimate.stats.size());
    for (const auto& stat : estimate.stats) {
        ConfidenceBand band;
        band.asset_index = stat.asset_index;
        band.alpha_abs = std::abs(stat.alpha_hat);
        band.alpha_bound = stat.s1 * scale;
        band.beta_abs = std::abs(stat.beta_sum_hat - 1.0);
        band.beta_bound = stat.s2 * scale;
        const bool over_alpha = band.alpha_abs > band.alpha_bound;
        const bool over_beta = band.beta_abs > band.beta_bound;
        band.in_mss = over_alpha || over_beta;
        band.exceed_source = over_alpha && over_beta ? ExceedSource::Both
                             : over_alpha           ? ExceedSource::Alpha
                             : over_beta            ? ExceedSource::Beta
                                                    : ExceedSource::None;
        bands.push_back(band);
    }
    return bands;
}

std::vector<std::pair<std::string, double>> rank_assets(
    const std::vector<SpanningStat>& stats, const std::vector<std::string>& labels) {
    std::vector<std::size_t> order(stats.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (stats[a].m_stat != stats[b].m_stat) return stats[a].m_stat > stats[b].m_stat;
        return stats[a].asset_index < stats[b].asset_index;
    });

    std::vector<std::pair<std::string, double>> ranking;
    ranking.reserve(stats.size());
    for (std::size_t j : order) {
        const auto idx = static_cast<std::size_t>(stats[j].asset_index);
        if (idx >= labels.size()) throw UsageError("asset index outside label list");
        ranking.emplace_back(labels[idx], stats[j].m_stat);
    }
    return ranking;
}

}  // namespace mss
