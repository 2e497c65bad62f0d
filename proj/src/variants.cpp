#include "mss/variants.hpp"

#include "mss/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace mss {

void VariantSpec::validate(int d) const {
    if (kind != VariantKind::Nonredundant) {
        if (!benchmark.empty() || !additional.empty())
            throw UsageError("benchmark/additional sets apply only to the nonredundant variant");
        return;
    }
    if (benchmark.empty()) throw UsageError("nonredundant variant needs a benchmark set");
    if (additional.empty()) throw UsageError("nonredundant variant needs an additional set");
    std::set<int> seen;
    for (int k : benchmark) {
        if (k < 0 || k >= d) throw UsageError("benchmark asset index out of range");
        if (!seen.insert(k).second) throw UsageError("duplicate asset in benchmark set");
    }
    for (int n : additional) {
        if (n < 0 || n >= d) throw UsageError("additional asset index out of range");
        if (!seen.insert(n).second)
            throw UsageError("benchmark and additional sets must be disjoint");
    }
    if (static_cast<int>(seen.size()) != d)
        throw UsageError("benchmark and additional sets must partition the panel assets");
}

const char* variant_name(VariantKind kind) {
    switch (kind) {
        case VariantKind::Mss: return "mss";
        case VariantKind::Tan: return "tan";
        case VariantKind::Gmv: return "gmv";
        case VariantKind::TanPlus: return "tan-plus";
        case VariantKind::Nonredundant: return "nonredundant";
    }
    return "mss";
}

VariantKind variant_from_name(const std::string& name) {
    if (name == "mss") return VariantKind::Mss;
    if (name == "tan") return VariantKind::Tan;
    if (name == "gmv") return VariantKind::Gmv;
    if (name == "tan-plus") return VariantKind::TanPlus;
    if (name == "nonredundant") return VariantKind::Nonredundant;
    throw UsageError("unknown variant '" + name + "'");
}

StatisticPlan make_statistic_plan(const VariantSpec& spec, int d) {
    spec.validate(d);
    StatisticPlan plan;
    switch (spec.kind) {
        case VariantKind::Mss:
            return exclusion_plan(d);
        case VariantKind::Tan:
            plan = exclusion_plan(d);
            plan.form = StatisticForm::AlphaAbs;
            return plan;
        case VariantKind::Gmv:
            plan = exclusion_plan(d);
            plan.form = StatisticForm::BetaAbs;
            return plan;
        case VariantKind::TanPlus:
            plan = exclusion_plan(d);
            plan.form = StatisticForm::AlphaSigned;
            return plan;
        case VariantKind::Nonredundant:
            plan.candidates = spec.additional;
            std::sort(plan.candidates.begin(), plan.candidates.end());
            plan.benchmark = spec.benchmark;
            std::sort(plan.benchmark.begin(), plan.benchmark.end());
            plan.form = StatisticForm::MaxBoth;
            return plan;
    }
    return plan;
}

SpanningStat variant_statistic(const ReturnPanel& panel, const VariantSpec& spec, int asset) {
    spec.validate(panel.d());

    RegressionFit fit;
    if (spec.kind == VariantKind::Nonredundant) {
        if (std::find(spec.additional.begin(), spec.additional.end(), asset) ==
            spec.additional.end())
            throw UsageError("asset is not in the additional set");
        std::vector<int> bench = spec.benchmark;
        std::sort(bench.begin(), bench.end());
        fit = fit_regression(panel, asset, bench);
    } else {
        fit = fit_exclusion_regression(panel, asset);
    }

    SpanningStat stat = spanning_statistic(fit, panel.T());
    switch (spec.kind) {
        case VariantKind::Mss:
        case VariantKind::Nonredundant:
            break;
        case VariantKind::Tan:
            stat.m_stat = stat.t_alpha;
            break;
        case VariantKind::Gmv:
            stat.m_stat = stat.t_beta;
            break;
        case VariantKind::TanPlus:
            stat.m_stat = std::sqrt(double(panel.T())) * stat.alpha_hat / stat.s1;
            break;
    }
    return stat;
}

std::vector<SpanningStat> variant_statistics(const ReturnPanel& panel,
                                             const VariantSpec& spec) {
    const auto plan = make_statistic_plan(spec, panel.d());
    std::vector<SpanningStat> stats;
    stats.reserve(plan.candidates.size());
    for (int asset : plan.candidates) stats.push_back(variant_statistic(panel, spec, asset));
    return stats;
}

MssEstimate variant_estimate(const ReturnPanel& panel, const VariantSpec& spec, double level,
                             int block_len, int B, std::uint64_t seed, int threads) {
    const auto plan = make_statistic_plan(spec, panel.d());
    const auto block = make_block_plan(panel.T(), block_len);
    const auto stats = plan_statistics(panel, plan);
    const auto draws = bootstrap_draws(panel, block, B, seed, plan, threads);
    return stepdown_core(stats, draws, level, spec.kind == VariantKind::Mss);
}

std::vector<ConfidenceBand> variant_confidence_bands(const MssEstimate& estimate, int T,
                                                     VariantKind kind) {
    auto bands = confidence_bands(estimate, T);
    if (kind == VariantKind::Mss || kind == VariantKind::Nonredundant) return bands;

    for (std::size_t j = 0; j < bands.size(); ++j) {
        auto& band = bands[j];
        bool in = false;
        switch (kind) {
            case VariantKind::Tan:
                in = band.alpha_abs > band.alpha_bound;
                break;
            case VariantKind::Gmv:
                in = band.beta_abs > band.beta_bound;
                break;
            case VariantKind::TanPlus:
                in = estimate.stats[j].alpha_hat > band.alpha_bound;
                break;
            default:
                break;
        }
        band.in_mss = in;
        if (!in) {
            band.exceed_source = ExceedSource::None;
        } else {
            band.exceed_source =
                kind == VariantKind::Gmv ? ExceedSource::Beta : ExceedSource::Alpha;
        }
    }
    return bands;
}

}  // namespace mss
