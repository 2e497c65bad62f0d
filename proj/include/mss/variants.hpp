#pragma once

#include "mss/bootstrap.hpp"
#include "mss/stepdown.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mss {

/// Which support the step-down machinery estimates.
///   Mss          — assets spanning the full mean-variance frontier
///   Tan          — tangency portfolio support (nonzero alpha)
///   Gmv          — global-minimum-variance support (coefficient sum != 1)
///   TanPlus      — assets with positive alpha (one-sided)
///   Nonredundant — additional assets not spanned by a benchmark set
enum class VariantKind { Mss, Tan, Gmv, TanPlus, Nonredundant };

struct VariantSpec {
    VariantKind kind = VariantKind::Mss;
    std::vector<int> benchmark;   // Nonredundant only
    std::vector<int> additional;  // Nonredundant only

    /// Throws UsageError unless the spec is coherent for a d-asset panel
    /// (for Nonredundant: benchmark and additional partition {0..d-1}).
    void validate(int d) const;
};

const char* variant_name(VariantKind kind);
VariantKind variant_from_name(const std::string& name);

/// Candidate set and statistic form the variant plugs into the bootstrap.
StatisticPlan make_statistic_plan(const VariantSpec& spec, int d);

/// Per-asset variant statistic on the original sample.
SpanningStat variant_statistic(const ReturnPanel& panel, const VariantSpec& spec, int asset);

/// All candidates of the variant, in candidate order.
std::vector<SpanningStat> variant_statistics(const ReturnPanel& panel,
                                             const VariantSpec& spec);

/// Bootstrap + step-down with the variant statistic substituted in. The
/// nonempty finite-sample adjustment applies only to the Mss kind; the other
/// targets can be genuinely empty.
MssEstimate variant_estimate(const ReturnPanel& panel, const VariantSpec& spec, double level,
                             int block_len, int B, std::uint64_t seed, int threads = 0);

/// Band classification honoring the variant's active side(s).
std::vector<ConfidenceBand> variant_confidence_bands(const MssEstimate& estimate, int T,
                                                     VariantKind kind);

}  // namespace mss
